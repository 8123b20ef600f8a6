//! Structured trees and their realizations.
//!
//! A structured tree is a rooted tree together with a graph on the children
//! of every internal node. Its realization has one vertex per tree node plus
//! one vertex per branch (root-to-leaf path); the branch vertex is adjacent
//! to every tree node on its branch, and the child graphs contribute their
//! edges between siblings. Tree edges themselves are not edges of the
//! realization.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};
use crate::{Error, Result};

/// Canonical name for a realization vertex: either a tree node (by its path
/// of child indices from the root) or the branch vertex of a leaf path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexAddress {
    Tree(Vec<u32>),
    BranchV(Vec<u32>),
}

impl fmt::Display for VertexAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (tag, path) = match self {
            VertexAddress::Tree(p) => ('t', p),
            VertexAddress::BranchV(p) => ('b', p),
        };
        write!(f, "{tag}")?;
        for c in path {
            write!(f, ".{c}")?;
        }
        Ok(())
    }
}

impl FromStr for VertexAddress {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('.');
        let tag = parts
            .next()
            .ok_or_else(|| Error::Tree(format!("bad address {s:?}")))?;
        let path: std::result::Result<Vec<u32>, _> = parts.map(str::parse).collect();
        let path = path.map_err(|_| Error::Tree(format!("bad address {s:?}")))?;
        match tag {
            "t" => Ok(VertexAddress::Tree(path)),
            "b" => Ok(VertexAddress::BranchV(path)),
            _ => Err(Error::Tree(format!("bad address tag in {s:?}"))),
        }
    }
}

/// A root-to-leaf path, stored as arena node ids of the owning tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub nodes: Vec<usize>,
}

/// Rooted tree with ordered children and a graph on the children of each
/// internal node. Nodes live in an arena in BFS order (root is node 0); the
/// internal graph of a node with `d` children is a graph on vertices
/// `0..d`, vertex `i` standing for child `i`.
#[derive(Debug, Clone)]
pub struct StructuredTree {
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    graphs: Vec<Option<Arc<Graph>>>,
}

/// Recursive builder input for [`StructuredTree::build`].
pub struct NodeSpec {
    pub graph: Option<Arc<Graph>>,
    pub children: Vec<NodeSpec>,
}

impl NodeSpec {
    pub fn leaf() -> NodeSpec {
        NodeSpec {
            graph: None,
            children: Vec::new(),
        }
    }

    pub fn internal(graph: Arc<Graph>, children: Vec<NodeSpec>) -> NodeSpec {
        NodeSpec {
            graph: Some(graph),
            children,
        }
    }
}

impl StructuredTree {
    /// Flattens a recursive spec into BFS arena order, checking that every
    /// internal graph is defined on exactly the children of its node and
    /// that leaves carry no graph.
    pub fn build(root: NodeSpec) -> Result<StructuredTree> {
        let mut children: Vec<Vec<usize>> = Vec::new();
        let mut parent: Vec<Option<usize>> = Vec::new();
        let mut graphs: Vec<Option<Arc<Graph>>> = Vec::new();
        let mut queue: std::collections::VecDeque<(NodeSpec, Option<usize>)> =
            std::collections::VecDeque::new();
        queue.push_back((root, None));
        while let Some((spec, par)) = queue.pop_front() {
            let id = children.len();
            children.push(Vec::new());
            parent.push(par);
            match (&spec.graph, spec.children.is_empty()) {
                (Some(g), false) => {
                    if g.vertex_count() != spec.children.len() {
                        return Err(Error::Tree(format!(
                            "internal graph on {} vertices for a node with {} children",
                            g.vertex_count(),
                            spec.children.len()
                        )));
                    }
                }
                (None, false) => {
                    return Err(Error::Tree("internal node without a child graph".into()))
                }
                (Some(_), true) => {
                    return Err(Error::Tree("leaf carries a child graph".into()))
                }
                (None, true) => {}
            }
            graphs.push(spec.graph.clone());
            if let Some(p) = par {
                children[p].push(id);
            }
            for c in spec.children {
                queue.push_back((c, Some(id)));
            }
        }
        // BFS insertion above appends children in arrival order, which can
        // interleave across parents; rebuild child lists from parent links
        // to keep sibling order stable.
        let mut ordered: Vec<Vec<usize>> = vec![Vec::new(); children.len()];
        for (id, par) in parent.iter().enumerate() {
            if let Some(p) = par {
                ordered[*p].push(id);
            }
        }
        Ok(StructuredTree {
            children: ordered,
            parent,
            graphs,
        })
    }

    pub fn node_count(&self) -> usize {
        self.children.len()
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn is_leaf(&self, node: usize) -> bool {
        self.children[node].is_empty()
    }

    pub fn internal_graph(&self, node: usize) -> Option<&Arc<Graph>> {
        self.graphs[node].as_ref()
    }

    /// 1-based level: the root is at level 1.
    pub fn level(&self, node: usize) -> usize {
        let mut depth = 1;
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            cur = p;
            depth += 1;
        }
        depth
    }

    /// Path of child indices from the root to `node`.
    pub fn path(&self, node: usize) -> Vec<u32> {
        let mut rev = Vec::new();
        let mut cur = node;
        while let Some(p) = self.parent[cur] {
            let idx = self.children[p].iter().position(|&c| c == cur).unwrap();
            rev.push(idx as u32);
            cur = p;
        }
        rev.reverse();
        rev
    }

    /// Node id for a path of child indices, if it exists.
    pub fn node_at(&self, path: &[u32]) -> Option<usize> {
        let mut cur = self.root();
        for &idx in path {
            cur = *self.children[cur].get(idx as usize)?;
        }
        Some(cur)
    }

    /// One branch per leaf, in depth-first leaf order.
    pub fn branches(&self) -> Vec<Branch> {
        let mut out = Vec::new();
        let mut stack = vec![(self.root(), vec![self.root()])];
        while let Some((node, path)) = stack.pop() {
            if self.is_leaf(node) {
                out.push(Branch { nodes: path });
            } else {
                for &c in self.children[node].iter().rev() {
                    let mut p = path.clone();
                    p.push(c);
                    stack.push((c, p));
                }
            }
        }
        out
    }

    /// The realization: tree nodes first in BFS (arena) order, then branch
    /// vertices in DFS-leaf order, labeled by [`VertexAddress`].
    pub fn realize(&self) -> Result<Graph> {
        let t = self.node_count();
        let branches = self.branches();
        let n = t + branches.len();
        let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
        for node in 0..t {
            if let Some(g) = &self.graphs[node] {
                let kids = &self.children[node];
                for &(u, v) in g.edges() {
                    edges.push((kids[u as usize] as VertexId, kids[v as usize] as VertexId));
                }
            }
        }
        for (bi, branch) in branches.iter().enumerate() {
            let bv = (t + bi) as VertexId;
            for &node in &branch.nodes {
                edges.push((node as VertexId, bv));
            }
        }
        let mut labels: Vec<VertexAddress> = (0..t)
            .map(|node| VertexAddress::Tree(self.path(node)))
            .collect();
        for branch in &branches {
            labels.push(VertexAddress::BranchV(
                self.path(*branch.nodes.last().unwrap()),
            ));
        }
        Graph::new(n, &edges)?.with_labels(labels)
    }
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct NodeJson {
    path: Vec<u32>,
    children: usize,
    graph_edges: Option<Vec<(VertexId, VertexId)>>,
}

#[derive(Serialize, Deserialize)]
struct TreeJson {
    nodes: Vec<NodeJson>,
}

pub fn encode_tree_json(t: &StructuredTree) -> String {
    let nodes = (0..t.node_count())
        .map(|node| NodeJson {
            path: t.path(node),
            children: t.children(node).len(),
            graph_edges: t.internal_graph(node).map(|g| g.edges().to_vec()),
        })
        .collect();
    serde_json::to_string(&TreeJson { nodes }).expect("tree json serialization")
}

pub fn decode_tree_json(text: &str) -> Result<StructuredTree> {
    let doc: TreeJson = serde_json::from_str(text)?;
    fn build_node(doc: &TreeJson, path: &[u32]) -> Result<NodeSpec> {
        let rec = doc
            .nodes
            .iter()
            .find(|n| n.path == path)
            .ok_or_else(|| Error::Tree(format!("missing node record for path {path:?}")))?;
        if rec.children == 0 {
            return Ok(NodeSpec::leaf());
        }
        let edges = rec.graph_edges.clone().unwrap_or_default();
        let graph = Arc::new(Graph::new(rec.children, &edges)?);
        let mut kids = Vec::with_capacity(rec.children);
        for i in 0..rec.children {
            let mut p = path.to_vec();
            p.push(i as u32);
            kids.push(build_node(doc, &p)?);
        }
        Ok(NodeSpec::internal(graph, kids))
    }
    StructuredTree::build(build_node(&doc, &[])?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    fn single_node() -> StructuredTree {
        StructuredTree::build(NodeSpec::leaf()).unwrap()
    }

    /// Root with two linked children.
    fn t3() -> StructuredTree {
        let k2 = Arc::new(Graph::new(2, &[(0, 1)]).unwrap());
        StructuredTree::build(NodeSpec::internal(
            k2,
            vec![NodeSpec::leaf(), NodeSpec::leaf()],
        ))
        .unwrap()
    }

    #[test]
    fn single_node_has_one_branch() {
        let t = single_node();
        let b = t.branches();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].nodes, vec![0]);
    }

    #[test]
    fn t3_has_two_branches() {
        assert_eq!(t3().branches().len(), 2);
    }

    #[test]
    fn single_node_realizes_to_k2() {
        let g = single_node().realize().unwrap();
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(graph::is_isomorphic(&g, &k2).unwrap());
    }

    #[test]
    fn t3_realizes_to_c5() {
        let g = t3().realize().unwrap();
        assert_eq!(g.vertex_count(), 5);
        let c5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert!(graph::is_isomorphic(&g, &c5).unwrap());
    }

    #[test]
    fn realization_size_and_degrees() {
        let t = t3();
        let g = t.realize().unwrap();
        assert_eq!(g.vertex_count(), t.node_count() + t.branches().len());
        // Branch vertices have degree equal to branch length; the root sees
        // exactly the branch vertices.
        let tcount = t.node_count();
        for (bi, branch) in t.branches().iter().enumerate() {
            assert_eq!(g.degree((tcount + bi) as VertexId), branch.nodes.len());
        }
        let root_nbrs: Vec<_> = g.neighbors(0).to_vec();
        assert_eq!(root_nbrs, vec![3, 4]);
    }

    #[test]
    fn mismatched_internal_graph_rejected() {
        let k2 = Arc::new(Graph::new(2, &[(0, 1)]).unwrap());
        let r = StructuredTree::build(NodeSpec::internal(k2, vec![NodeSpec::leaf()]));
        assert!(r.is_err());
    }

    #[test]
    fn tree_json_round_trip() {
        let t = t3();
        let s = encode_tree_json(&t);
        let t2 = decode_tree_json(&s).unwrap();
        assert_eq!(t.realize().unwrap(), t2.realize().unwrap());
    }

    #[test]
    fn address_display_parse() {
        for a in [
            VertexAddress::Tree(vec![]),
            VertexAddress::Tree(vec![0, 3]),
            VertexAddress::BranchV(vec![1, 2, 0]),
        ] {
            assert_eq!(a.to_string().parse::<VertexAddress>().unwrap(), a);
        }
    }
}
