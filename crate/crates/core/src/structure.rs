//! Structural predicates: triangle detection, non-adjacent twins, edgeless
//! vertex cutsets of size at most two, the resulting decomposition witness,
//! and induced-cube detection.

use serde::{Deserialize, Serialize};

use crate::graph::{self, Graph, VertexId};
use crate::{Error, Result};

/// Default vertex cap for the induced-cube search.
pub const CUBE_DEFAULT_CAP: usize = 1000;

/// Why a graph is decomposable: non-adjacent twins, a small edgeless
/// cutset, outright disconnection, or nothing (which, on a graph of the
/// closed class with at least 3 vertices, would be a counterexample).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum DecompositionWitness {
    Disconnected {
        components: Vec<Vec<VertexId>>,
    },
    Twins {
        u: VertexId,
        v: VertexId,
    },
    Cutset {
        set: Vec<VertexId>,
        components: Vec<Vec<VertexId>>,
    },
    None,
}

/// First triangle in lexicographic order, if any. Scans each edge and
/// intersects the endpoint neighborhoods.
pub fn has_triangle(g: &Graph) -> Option<(VertexId, VertexId, VertexId)> {
    for &(u, v) in g.edges() {
        let (mut i, mut j) = (0, 0);
        let (nu, nv) = (g.neighbors(u), g.neighbors(v));
        while i < nu.len() && j < nv.len() {
            match nu[i].cmp(&nv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    let mut t = [u, v, nu[i]];
                    t.sort_unstable();
                    return Some((t[0], t[1], t[2]));
                }
            }
        }
    }
    None
}

/// First pair (u, v) in lexicographic id order with u not adjacent to v and
/// identical neighborhoods.
pub fn find_nonadjacent_twins(g: &Graph) -> Option<(VertexId, VertexId)> {
    let n = g.vertex_count() as VertexId;
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && g.neighbors(u) == g.neighbors(v) {
                return Some((u, v));
            }
        }
    }
    None
}

fn connected_after_removal(g: &Graph, removed: &[VertexId]) -> (bool, Vec<Vec<VertexId>>) {
    let n = g.vertex_count();
    let mut banned = vec![false; n];
    for &v in removed {
        banned[v as usize] = true;
    }
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if banned[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start as VertexId];
        seen[start] = true;
        let mut stack = vec![start as VertexId];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !banned[w as usize] && !seen[w as usize] {
                    seen[w as usize] = true;
                    comp.push(w);
                    stack.push(w);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    (comps.len() <= 1, comps)
}

/// Smallest independent set of size at most `max_size` (0, 1, or 2) whose
/// removal leaves at least two non-empty components; ties broken
/// lexicographically. The empty set answers exactly when the graph is
/// already disconnected.
pub fn find_edgeless_cutset(
    g: &Graph,
    max_size: usize,
) -> Option<(Vec<VertexId>, Vec<Vec<VertexId>>)> {
    let n = g.vertex_count() as VertexId;
    let (connected, comps) = connected_after_removal(g, &[]);
    if !connected {
        return Some((Vec::new(), comps));
    }
    if max_size >= 1 {
        for v in 0..n {
            let (conn, comps) = connected_after_removal(g, &[v]);
            if !conn && comps.len() >= 2 {
                return Some((vec![v], comps));
            }
        }
    }
    if max_size >= 2 {
        for u in 0..n {
            for v in u + 1..n {
                if g.has_edge(u, v) {
                    continue;
                }
                let (conn, comps) = connected_after_removal(g, &[u, v]);
                if !conn && comps.len() >= 2 {
                    return Some((vec![u, v], comps));
                }
            }
        }
    }
    None
}

/// Decomposition order: disconnection, then twins, then a cutset of size
/// at most two. `None` on a graph of the class with >= 3 vertices would
/// falsify the headline claim.
pub fn decompose(g: &Graph) -> DecompositionWitness {
    let comps = g.components();
    if comps.len() >= 2 {
        return DecompositionWitness::Disconnected { components: comps };
    }
    if let Some((u, v)) = find_nonadjacent_twins(g) {
        return DecompositionWitness::Twins { u, v };
    }
    if let Some((set, components)) = find_edgeless_cutset(g, 2) {
        return DecompositionWitness::Cutset { set, components };
    }
    DecompositionWitness::None
}

/// The 3-cube on vertices 0..8, adjacency by single-bit difference.
pub fn cube_graph() -> Graph {
    let mut edges = Vec::new();
    for v in 0u32..8 {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    Graph::new(8, &edges).expect("cube edges are valid")
}

/// An 8-vertex set inducing the 3-cube, or `None`. Backtracking
/// induced-subgraph search; candidates must have degree at least 3.
pub fn contains_induced_cube(g: &Graph) -> Result<Option<Vec<VertexId>>> {
    contains_induced_cube_capped(g, CUBE_DEFAULT_CAP)
}

pub fn contains_induced_cube_capped(g: &Graph, cap: usize) -> Result<Option<Vec<VertexId>>> {
    if g.vertex_count() > cap {
        return Err(Error::SizeCap {
            n: g.vertex_count(),
            cap,
        });
    }
    let pattern = cube_graph();
    // Each vertex after the first is adjacent to an earlier one in this order.
    let order: [VertexId; 8] = [0, 1, 2, 4, 3, 5, 6, 7];
    let found = find_induced(&pattern, &order, g);
    if let Some(set) = &found {
        // Post-verify against the abstract pattern.
        let (ind, _) = g.induced_subgraph(set)?;
        debug_assert!(graph::is_isomorphic(&ind, &pattern)?);
    }
    Ok(found.map(|mut s| {
        s.sort_unstable();
        s
    }))
}

/// Finds an induced embedding of `pattern` into `host`, mapping pattern
/// vertices in the given order.
fn find_induced(pattern: &Graph, order: &[VertexId], host: &Graph) -> Option<Vec<VertexId>> {
    let mut mapping: Vec<Option<VertexId>> = vec![None; pattern.vertex_count()];
    let mut used = vec![false; host.vertex_count()];
    fn recurse(
        pattern: &Graph,
        order: &[VertexId],
        host: &Graph,
        depth: usize,
        mapping: &mut Vec<Option<VertexId>>,
        used: &mut Vec<bool>,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let p = order[depth];
        let pdeg = pattern.degree(p);
        // Enumerate from a mapped pattern-neighbor's host neighborhood when
        // possible, otherwise over all host vertices.
        let anchor = pattern
            .neighbors(p)
            .iter()
            .find_map(|&q| mapping[q as usize]);
        let candidates: Vec<VertexId> = match anchor {
            Some(h) => host.neighbors(h).to_vec(),
            None => (0..host.vertex_count() as VertexId).collect(),
        };
        'cand: for w in candidates {
            if used[w as usize] || host.degree(w) < pdeg {
                continue;
            }
            for q in 0..pattern.vertex_count() as VertexId {
                if let Some(h) = mapping[q as usize] {
                    if pattern.has_edge(p, q) != host.has_edge(w, h) {
                        continue 'cand;
                    }
                }
            }
            mapping[p as usize] = Some(w);
            used[w as usize] = true;
            if recurse(pattern, order, host, depth + 1, mapping, used) {
                return true;
            }
            mapping[p as usize] = None;
            used[w as usize] = false;
        }
        false
    }
    if recurse(pattern, order, host, 0, &mut mapping, &mut used) {
        Some(mapping.into_iter().map(Option::unwrap).collect())
    } else {
        None
    }
}
