//! The twincut family: recursive construction of the structured trees
//! `T_k`, their realizations `G_k`, and the size recurrence.
//!
//! `G_1` is a single vertex. For `k >= 2`, `T_k` has `k - 1` levels (root
//! at level 1); every node at level `i < k - 1` gets `|V(G_{i+1})|`
//! children carrying a copy of `G_{i+1}` as its child graph, and `G_k` is
//! the realization of `T_k`.

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigUint;

use crate::graph::{Graph, VertexId};
use crate::tree::{NodeSpec, StructuredTree, VertexAddress};
use crate::{Error, Result};

/// Largest k materialized without an explicit override. `G_6` has 217,823
/// vertices and is still buildable; `G_7` is astronomically larger.
pub const DEFAULT_MAX_K: u32 = 6;

/// One materialized level of the family: the tree (absent for `G_1`), the
/// realization with its address labels, and the id/address bijection.
#[derive(Debug)]
pub struct TwincutGraph {
    pub k: u32,
    pub tree: Option<StructuredTree>,
    pub graph: Graph,
    addr_to_id: HashMap<VertexAddress, VertexId>,
}

impl TwincutGraph {
    pub fn address_of(&self, v: VertexId) -> Result<&VertexAddress> {
        self.graph
            .label(v)
            .ok_or(Error::UnknownVertex(v))
    }

    pub fn id_of(&self, addr: &VertexAddress) -> Result<VertexId> {
        self.addr_to_id
            .get(addr)
            .copied()
            .ok_or_else(|| Error::Tree(format!("no vertex at address {addr}")))
    }

    pub fn is_branch_vertex(&self, v: VertexId) -> bool {
        matches!(self.graph.label(v), Some(VertexAddress::BranchV(_)))
    }

    /// Tree-node arena ids coincide with realization vertex ids (tree nodes
    /// come first, in BFS order).
    pub fn tree_node_id(&self, node: usize) -> VertexId {
        node as VertexId
    }
}

/// Materialized prefix `G_1 .. G_k` of the family, sharing internal-graph
/// copies across levels.
#[derive(Debug)]
pub struct TwincutFamily {
    levels: Vec<Arc<TwincutGraph>>,
}

impl TwincutFamily {
    /// Builds `G_1 .. G_k` under the default feasibility bound.
    pub fn new(k: u32) -> Result<TwincutFamily> {
        Self::with_limit(k, DEFAULT_MAX_K)
    }

    /// Builds with an explicit bound override.
    pub fn with_limit(k: u32, max_k: u32) -> Result<TwincutFamily> {
        if k < 1 {
            return Err(Error::Index(k, "k must be at least 1".into()));
        }
        if k > max_k {
            return Err(Error::Infeasible {
                k,
                max_k,
                vertices: vertex_count(k),
            });
        }
        let mut levels: Vec<Arc<TwincutGraph>> = Vec::with_capacity(k as usize);
        let g1 = Graph::new(1, &[])?.with_labels(vec![VertexAddress::Tree(vec![])])?;
        levels.push(Arc::new(make_level(1, None, g1)?));
        for i in 2..=k {
            let tree = build_tree_inner(i, &levels)?;
            let graph = tree.realize()?;
            levels.push(Arc::new(make_level(i, Some(tree), graph)?));
        }
        Ok(TwincutFamily { levels })
    }

    pub fn max_k(&self) -> u32 {
        self.levels.len() as u32
    }

    pub fn level(&self, k: u32) -> Result<&Arc<TwincutGraph>> {
        self.levels
            .get(k as usize - 1)
            .ok_or_else(|| Error::Index(k, format!("family built up to k={}", self.max_k())))
    }

    pub fn graph(&self, k: u32) -> Result<&Graph> {
        Ok(&self.level(k)?.graph)
    }

    pub fn tree(&self, k: u32) -> Result<&StructuredTree> {
        self.level(k)?
            .tree
            .as_ref()
            .ok_or_else(|| Error::Index(k, "G_1 has no underlying tree".into()))
    }
}

fn make_level(k: u32, tree: Option<StructuredTree>, graph: Graph) -> Result<TwincutGraph> {
    let addr_to_id = graph
        .labels()
        .expect("twincut graphs are labeled")
        .iter()
        .enumerate()
        .map(|(i, a)| (a.clone(), i as VertexId))
        .collect();
    Ok(TwincutGraph {
        k,
        tree,
        graph,
        addr_to_id,
    })
}

fn build_tree_inner(k: u32, lower: &[Arc<TwincutGraph>]) -> Result<StructuredTree> {
    if k < 2 {
        return Err(Error::Index(k, "T_k exists only for k >= 2".into()));
    }
    // Shared copies: the child graph of every level-i node is the same Arc.
    let copies: Vec<Arc<Graph>> = lower
        .iter()
        .map(|tg| Arc::new(tg.graph.clone()))
        .collect();
    fn spec(level: u32, k: u32, copies: &[Arc<Graph>]) -> NodeSpec {
        if level == k - 1 {
            return NodeSpec::leaf();
        }
        let g = copies[level as usize].clone(); // G_{level+1}
        let kids = (0..g.vertex_count())
            .map(|_| spec(level + 1, k, copies))
            .collect();
        NodeSpec::internal(g, kids)
    }
    StructuredTree::build(spec(1, k, &copies))
}

/// Builds `T_k` standalone (k >= 2), under the default feasibility bound.
pub fn build_tree(k: u32) -> Result<StructuredTree> {
    if k < 2 {
        return Err(Error::Index(k, "T_k exists only for k >= 2".into()));
    }
    let family = TwincutFamily::new(k)?;
    Ok(family.tree(k)?.clone())
}

/// Builds `G_k` standalone, under the default feasibility bound.
pub fn build_graph(k: u32) -> Result<Graph> {
    let family = TwincutFamily::new(k)?;
    Ok(family.graph(k)?.clone())
}

/// `|V(G_k)|` by the size recurrence, exact for any k via big integers.
/// With `m_1 = 1` and `m_{l+1} = m_l * |V(G_{l+1})|`, the tree `T_k` has
/// `m_1 + ... + m_{k-1}` nodes and `m_{k-1}` branches.
pub fn vertex_count(k: u32) -> BigUint {
    let one = BigUint::from(1u32);
    if k <= 1 {
        return one;
    }
    // counts[i] = |V(G_{i+1})| for already-computed levels
    let mut counts: Vec<BigUint> = vec![one.clone()];
    for level in 2..=k {
        let mut m = BigUint::from(1u32);
        let mut total = BigUint::from(0u32);
        for l in 1..level {
            if l > 1 {
                m *= &counts[l as usize - 1];
            }
            total += &m;
        }
        total += &m; // branches
        counts.push(total);
    }
    counts[k as usize - 1].clone()
}
