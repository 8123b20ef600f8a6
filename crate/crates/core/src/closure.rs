//! Build-script certificates for membership in the closed class generated
//! from graphs of size at most two by (a) substituting a vertex with a
//! stable set of size two and (b) gluing two graphs along a stable set of
//! size at most two.
//!
//! A certificate is a linear script over named intermediate graphs with
//! explicit vertex ids; replay is a fold that validates every step. The
//! derivation for a structured-tree realization assigns every surviving
//! vertex its canonical realization id up front, so the replayed result is
//! labeled-identical to the realization with no isomorphism search.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};
use crate::structure;
use crate::tree::StructuredTree;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    /// A starting graph on at most two vertices.
    Base {
        name: String,
        vertices: Vec<VertexId>,
        edges: Vec<(VertexId, VertexId)>,
    },
    /// Adds a non-adjacent twin of `vertex` named `twin`.
    Substitute {
        name: String,
        source: String,
        vertex: VertexId,
        twin: VertexId,
    },
    /// Disjoint union of `left` and `right`, then each pair in `identify`
    /// merges a right vertex into a left vertex (left id survives). The
    /// identified set must be independent on both sides and hold at most
    /// two pairs.
    Glue {
        name: String,
        left: String,
        right: String,
        identify: Vec<(VertexId, VertexId)>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosureCertificate {
    pub steps: Vec<Step>,
    pub result: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertStats {
    pub base: usize,
    pub substitute: usize,
    pub glue: usize,
    pub max_intermediate: usize,
}

/// Intermediate graph over explicit (not necessarily dense) vertex ids.
#[derive(Debug, Clone)]
struct NamedGraph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl NamedGraph {
    fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    fn to_graph(&self) -> Result<Graph> {
        let ids: Vec<VertexId> = self.adj.keys().copied().collect();
        let index: HashMap<VertexId, VertexId> = ids
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as VertexId))
            .collect();
        let mut edges = Vec::new();
        for (&u, nbrs) in &self.adj {
            for &v in nbrs {
                if u < v {
                    edges.push((index[&u], index[&v]));
                }
            }
        }
        Graph::new(ids.len(), &edges)
    }
}

/// Options for [`replay`]: checking triangle-freeness of every
/// intermediate costs a scan per step.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReplayOptions {
    pub check_triangle_free: bool,
}

pub struct ReplayOutcome {
    pub graph: Graph,
    pub stats: CertStats,
}

/// Executes and validates a certificate. Any invariant violation is an
/// error naming the offending step; this is the certificate checker.
pub fn replay(cert: &ClosureCertificate) -> Result<Graph> {
    Ok(replay_with(cert, ReplayOptions::default())?.graph)
}

pub fn replay_with(cert: &ClosureCertificate, opts: ReplayOptions) -> Result<ReplayOutcome> {
    let mut table: HashMap<String, NamedGraph> = HashMap::new();
    let mut stats = CertStats {
        base: 0,
        substitute: 0,
        glue: 0,
        max_intermediate: 0,
    };
    let fail = |step: usize, reason: String| Error::Certificate { step, reason };
    for (i, step) in cert.steps.iter().enumerate() {
        let (name, g) = match step {
            Step::Base {
                name,
                vertices,
                edges,
            } => {
                stats.base += 1;
                if vertices.len() > 2 {
                    return Err(fail(i, format!("base graph has {} vertices", vertices.len())));
                }
                let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> =
                    vertices.iter().map(|&v| (v, BTreeSet::new())).collect();
                if adj.len() != vertices.len() {
                    return Err(fail(i, "duplicate base vertex ids".into()));
                }
                for &(u, v) in edges {
                    if u == v {
                        return Err(fail(i, format!("self-loop on {u}")));
                    }
                    if !adj.contains_key(&u) || !adj.contains_key(&v) {
                        return Err(fail(i, format!("edge ({u},{v}) uses unknown vertices")));
                    }
                    adj.get_mut(&u).unwrap().insert(v);
                    adj.get_mut(&v).unwrap().insert(u);
                }
                (name, NamedGraph { adj })
            }
            Step::Substitute {
                name,
                source,
                vertex,
                twin,
            } => {
                stats.substitute += 1;
                let src = table
                    .get(source)
                    .ok_or_else(|| fail(i, format!("unknown source graph {source:?}")))?;
                if !src.has_vertex(*vertex) {
                    return Err(fail(i, format!("vertex {vertex} not in {source:?}")));
                }
                if src.has_vertex(*twin) {
                    return Err(fail(i, format!("twin id {twin} already present in {source:?}")));
                }
                let mut g = src.clone();
                let nbrs = g.adj[vertex].clone();
                for &w in &nbrs {
                    g.adj.get_mut(&w).unwrap().insert(*twin);
                }
                g.adj.insert(*twin, nbrs);
                (name, g)
            }
            Step::Glue {
                name,
                left,
                right,
                identify,
            } => {
                stats.glue += 1;
                let lg = table
                    .get(left)
                    .ok_or_else(|| fail(i, format!("unknown left graph {left:?}")))?;
                let rg = table
                    .get(right)
                    .ok_or_else(|| fail(i, format!("unknown right graph {right:?}")))?;
                if left == right {
                    return Err(fail(i, "gluing a graph with itself".into()));
                }
                if identify.len() > 2 {
                    return Err(fail(i, format!("identified set has {} pairs", identify.len())));
                }
                let lids: Vec<VertexId> = identify.iter().map(|p| p.0).collect();
                let rids: Vec<VertexId> = identify.iter().map(|p| p.1).collect();
                for &v in &lids {
                    if !lg.has_vertex(v) {
                        return Err(fail(i, format!("left vertex {v} not in {left:?}")));
                    }
                }
                for &v in &rids {
                    if !rg.has_vertex(v) {
                        return Err(fail(i, format!("right vertex {v} not in {right:?}")));
                    }
                }
                if lids.len() == 2 {
                    if lids[0] == lids[1] || rids[0] == rids[1] {
                        return Err(fail(i, "identification repeats a vertex of one operand".into()));
                    }
                    if lg.has_edge(lids[0], lids[1]) {
                        return Err(fail(i, "identified set is not independent in the left operand".into()));
                    }
                    if rg.has_edge(rids[0], rids[1]) {
                        return Err(fail(i, "identified set is not independent in the right operand".into()));
                    }
                }
                // Unidentified right vertices must not collide with left ids.
                let rmap: HashMap<VertexId, VertexId> =
                    identify.iter().map(|&(l, r)| (r, l)).collect();
                for &v in rg.adj.keys() {
                    if !rmap.contains_key(&v) && lg.has_vertex(v) {
                        return Err(fail(
                            i,
                            format!("right vertex {v} collides with a left vertex outside the identification"),
                        ));
                    }
                }
                let mut g = lg.clone();
                let tr = |v: VertexId| rmap.get(&v).copied().unwrap_or(v);
                for (&v, nbrs) in &rg.adj {
                    g.adj.entry(tr(v)).or_default();
                    for &w in nbrs {
                        let (a, b) = (tr(v), tr(w));
                        g.adj.entry(a).or_default().insert(b);
                        g.adj.entry(b).or_default().insert(a);
                    }
                }
                (name, g)
            }
        };
        if table.contains_key(name) {
            return Err(fail(i, format!("name {name:?} defined twice")));
        }
        stats.max_intermediate = stats.max_intermediate.max(g.adj.len());
        if opts.check_triangle_free {
            let plain = g.to_graph()?;
            if let Some(t) = structure::has_triangle(&plain) {
                return Err(fail(i, format!("intermediate contains triangle {t:?}")));
            }
        }
        table.insert(name.clone(), g);
    }
    let final_graph = table
        .get(&cert.result)
        .ok_or_else(|| fail(cert.steps.len(), format!("result {:?} never defined", cert.result)))?;
    Ok(ReplayOutcome {
        graph: final_graph.to_graph()?,
        stats,
    })
}

/// Step-kind totals and the largest intermediate, by replaying quietly.
pub fn certificate_stats(cert: &ClosureCertificate) -> Result<CertStats> {
    Ok(replay_with(cert, ReplayOptions::default())?.stats)
}

// ---------------------------------------------------------------------------
// Derivation for structured-tree realizations
// ---------------------------------------------------------------------------

struct Deriver<'a> {
    tree: &'a StructuredTree,
    /// Certificate for the child graph of each internal node, replaying to
    /// that graph on dense ids 0..d.
    part_cert: &'a dyn Fn(usize) -> Result<ClosureCertificate>,
    /// Final realization id of each branch vertex, keyed by leaf node.
    branch_id: HashMap<usize, VertexId>,
    steps: Vec<Step>,
    fresh: VertexId,
    name_counter: usize,
}

impl Deriver<'_> {
    fn fresh_id(&mut self) -> VertexId {
        let id = self.fresh;
        self.fresh += 1;
        id
    }

    fn fresh_name(&mut self) -> String {
        let n = format!("g{}", self.name_counter);
        self.name_counter += 1;
        n
    }

    /// Inlines a sub-certificate, renaming its intermediates and mapping
    /// its result ids through `final_id` and everything else to fresh
    /// temporary ids. Returns the name of its result.
    fn inline(&mut self, cert: &ClosureCertificate, final_id: &dyn Fn(VertexId) -> Option<VertexId>) -> Result<String> {
        let mut names: HashMap<&str, String> = HashMap::new();
        let mut ids: HashMap<VertexId, VertexId> = HashMap::new();
        let tr = |this: &mut Self, ids: &mut HashMap<VertexId, VertexId>, v: VertexId| -> VertexId {
            if let Some(f) = final_id(v) {
                return f;
            }
            *ids.entry(v).or_insert_with(|| this.fresh_id())
        };
        for step in &cert.steps {
            let step = match step {
                Step::Base {
                    name,
                    vertices,
                    edges,
                } => {
                    let new = self.fresh_name();
                    names.insert(name, new.clone());
                    Step::Base {
                        name: new,
                        vertices: vertices.iter().map(|&v| tr(self, &mut ids, v)).collect(),
                        edges: edges
                            .iter()
                            .map(|&(u, v)| (tr(self, &mut ids, u), tr(self, &mut ids, v)))
                            .collect(),
                    }
                }
                Step::Substitute {
                    name,
                    source,
                    vertex,
                    twin,
                } => {
                    let new = self.fresh_name();
                    names.insert(name, new.clone());
                    Step::Substitute {
                        name: new,
                        source: names[source.as_str()].clone(),
                        vertex: tr(self, &mut ids, *vertex),
                        twin: tr(self, &mut ids, *twin),
                    }
                }
                Step::Glue {
                    name,
                    left,
                    right,
                    identify,
                } => {
                    let new = self.fresh_name();
                    names.insert(name, new.clone());
                    Step::Glue {
                        name: new,
                        left: names[left.as_str()].clone(),
                        right: names[right.as_str()].clone(),
                        identify: identify
                            .iter()
                            .map(|&(l, r)| (tr(self, &mut ids, l), tr(self, &mut ids, r)))
                            .collect(),
                    }
                }
            };
            self.steps.push(step);
        }
        Ok(names[cert.result.as_str()].clone())
    }

    /// Emits the derivation of the subtree realization rooted at `node`
    /// and returns its graph name. Surviving vertices carry their final
    /// realization ids throughout.
    fn emit(&mut self, node: usize) -> Result<String> {
        let node_id = node as VertexId;
        if self.tree.is_leaf(node) {
            // A leaf realizes to a single edge: the leaf and its branch vertex.
            let name = self.fresh_name();
            let bv = self.branch_id[&node];
            self.steps.push(Step::Base {
                name: name.clone(),
                vertices: vec![node_id, bv],
                edges: vec![(node_id, bv)],
            });
            return Ok(name);
        }
        let children: Vec<usize> = self.tree.children(node).to_vec();
        let part = (self.part_cert)(node)?;
        // Child graph vertex j is child j of this node; its final id is the
        // child's arena id.
        let child_ids: Vec<VertexId> = children.iter().map(|&c| c as VertexId).collect();
        let d = children.len() as VertexId;
        let part_name = self.inline(&part, &|v| {
            (v < d).then(|| child_ids[v as usize])
        })?;
        let mut acc = part_name;
        for (i, &child) in children.iter().enumerate() {
            let sub = self.emit(child)?;
            let child_id = child as VertexId;
            if i == 0 {
                // The twin of the first child's subtree root becomes this
                // node's vertex: it inherits adjacency to exactly that
                // subtree's branch vertices.
                let subst = self.fresh_name();
                self.steps.push(Step::Substitute {
                    name: subst.clone(),
                    source: sub,
                    vertex: child_id,
                    twin: node_id,
                });
                let glued = self.fresh_name();
                self.steps.push(Step::Glue {
                    name: glued.clone(),
                    left: acc,
                    right: subst,
                    identify: vec![(child_id, child_id)],
                });
                acc = glued;
            } else {
                let twin = self.fresh_id();
                let subst = self.fresh_name();
                self.steps.push(Step::Substitute {
                    name: subst.clone(),
                    source: sub,
                    vertex: child_id,
                    twin,
                });
                let glued = self.fresh_name();
                self.steps.push(Step::Glue {
                    name: glued.clone(),
                    left: acc,
                    right: subst,
                    identify: vec![(node_id, twin), (child_id, child_id)],
                });
                acc = glued;
            }
        }
        Ok(acc)
    }
}

/// Derives a certificate whose replay is vertex-labeled-identical to
/// `realize(t)`. `part_cert(node)` must supply, for every internal node, a
/// certificate replaying to its child graph on dense ids.
pub fn derive_certificate(
    t: &StructuredTree,
    part_cert: &dyn Fn(usize) -> Result<ClosureCertificate>,
) -> Result<ClosureCertificate> {
    let tree_nodes = t.node_count();
    let branches = t.branches();
    let n = tree_nodes + branches.len();
    let branch_id = branches
        .iter()
        .enumerate()
        .map(|(bi, b)| (*b.nodes.last().unwrap(), (tree_nodes + bi) as VertexId))
        .collect();
    let mut deriver = Deriver {
        tree: t,
        part_cert,
        branch_id,
        steps: Vec::new(),
        fresh: n as VertexId,
        name_counter: 0,
    };
    let result = deriver.emit(t.root())?;
    Ok(ClosureCertificate {
        steps: deriver.steps,
        result,
    })
}

/// Certificate for `G_k`, with the per-level canonical certificates built
/// once and inlined (id-translated) at every placement. Replays to a graph
/// labeled-identical to the canonical `G_k`.
pub fn twincut_certificate(family: &crate::twincut::TwincutFamily, k: u32) -> Result<ClosureCertificate> {
    if k < 2 {
        return Err(Error::Index(k, "certificates start at G_2".into()));
    }
    // level_certs[i] replays to G_{i+2} on canonical ids.
    let mut level_certs: Vec<ClosureCertificate> = Vec::new();
    for i in 2..=k {
        let tree = family.tree(i)?;
        let cert = derive_certificate(tree, &|node| {
            // A node at level l carries a copy of G_{l+1}.
            let l = tree.level(node);
            Ok(level_certs[l - 1].clone())
        })?;
        level_certs.push(cert);
    }
    Ok(level_certs.pop().unwrap())
}

/// Certificate for a graph on at most two dense vertices.
pub fn base_certificate(g: &Graph) -> Result<ClosureCertificate> {
    if g.vertex_count() > 2 {
        return Err(Error::Certificate {
            step: 0,
            reason: format!("base certificates cover at most 2 vertices, got {}", g.vertex_count()),
        });
    }
    Ok(ClosureCertificate {
        steps: vec![Step::Base {
            name: "g0".into(),
            vertices: (0..g.vertex_count() as VertexId).collect(),
            edges: g.edges().to_vec(),
        }],
        result: "g0".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{self, Graph};
    use crate::tree::{NodeSpec, StructuredTree};
    use std::sync::Arc;

    #[test]
    fn replay_base_k1() {
        let cert = base_certificate(&Graph::new(1, &[]).unwrap()).unwrap();
        let g = replay(&cert).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 0));
        assert_eq!(
            certificate_stats(&cert).unwrap(),
            CertStats { base: 1, substitute: 0, glue: 0, max_intermediate: 1 }
        );
    }

    #[test]
    fn substitute_on_k2_gives_p3() {
        let cert = ClosureCertificate {
            steps: vec![
                Step::Base {
                    name: "a".into(),
                    vertices: vec![0, 1],
                    edges: vec![(0, 1)],
                },
                Step::Substitute {
                    name: "b".into(),
                    source: "a".into(),
                    vertex: 0,
                    twin: 2,
                },
            ],
            result: "b".into(),
        };
        let g = replay(&cert).unwrap();
        let p3 = Graph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(graph::is_isomorphic(&g, &p3).unwrap());
    }

    #[test]
    fn invalid_steps_are_named() {
        let cert = ClosureCertificate {
            steps: vec![
                Step::Base {
                    name: "a".into(),
                    vertices: vec![0, 1, 2],
                    edges: vec![],
                },
            ],
            result: "a".into(),
        };
        match replay(&cert) {
            Err(Error::Certificate { step: 0, .. }) => {}
            other => panic!("expected step-0 failure, got {other:?}"),
        }
    }

    #[test]
    fn glue_rejects_dependent_identification() {
        let cert = ClosureCertificate {
            steps: vec![
                Step::Base {
                    name: "a".into(),
                    vertices: vec![0, 1],
                    edges: vec![(0, 1)],
                },
                Step::Base {
                    name: "b".into(),
                    vertices: vec![2, 3],
                    edges: vec![],
                },
                Step::Glue {
                    name: "c".into(),
                    left: "a".into(),
                    right: "b".into(),
                    identify: vec![(0, 2), (1, 3)],
                },
            ],
            result: "c".into(),
        };
        match replay(&cert) {
            Err(Error::Certificate { step: 2, reason }) => {
                assert!(reason.contains("independent"));
            }
            other => panic!("expected step-2 failure, got {other:?}"),
        }
    }

    #[test]
    fn single_node_tree_derives_to_one_base() {
        let t = StructuredTree::build(NodeSpec::leaf()).unwrap();
        let cert = derive_certificate(&t, &|_| unreachable!("no internal nodes")).unwrap();
        assert_eq!(cert.steps.len(), 1);
        let g = replay(&cert).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
    }

    #[test]
    fn t3_certificate_replays_to_c5() {
        let k2 = Arc::new(Graph::new(2, &[(0, 1)]).unwrap());
        let t = StructuredTree::build(NodeSpec::internal(
            k2.clone(),
            vec![NodeSpec::leaf(), NodeSpec::leaf()],
        ))
        .unwrap();
        let cert = derive_certificate(&t, &|_| base_certificate(&k2)).unwrap();
        let g = replay(&cert).unwrap();
        assert_eq!(g, {
            let mut r = t.realize().unwrap();
            // replayed graphs are unlabeled
            r = Graph::new(r.vertex_count(), r.edges()).unwrap();
            r
        });
        let stats = certificate_stats(&cert).unwrap();
        assert_eq!(stats.glue, 2);
    }
}
