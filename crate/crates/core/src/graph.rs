//! Immutable simple undirected graphs with dense vertex ids, exact
//! isomorphism testing for small graphs, and bit-exact graph6 / DIMACS
//! serialization.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::tree::VertexAddress;
use crate::{Error, Result};

/// Dense vertex index, unique within one [`Graph`].
pub type VertexId = u32;

/// Default vertex cap for the exact isomorphism backtracker.
pub const ISO_DEFAULT_CAP: usize = 64;

/// Immutable simple undirected graph. Vertices are `0..n`, adjacency is
/// stored as sorted neighbor lists, and an optional label table maps each
/// vertex back to its [`VertexAddress`] in a structured-tree realization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    /// Sorted, deduplicated, with u < v in every pair.
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<VertexId>>,
    labels: Option<Vec<VertexAddress>>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list. Edges are
    /// deduplicated; self-loops and out-of-range endpoints are rejected.
    pub fn new(n: usize, edge_list: &[(VertexId, VertexId)]) -> Result<Graph> {
        let mut edges: Vec<(VertexId, VertexId)> = Vec::with_capacity(edge_list.len());
        for &(u, v) in edge_list {
            if u as usize >= n {
                return Err(Error::EndpointOutOfRange(u, n));
            }
            if v as usize >= n {
                return Err(Error::EndpointOutOfRange(v, n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        Ok(Graph {
            n,
            edges,
            adj,
            labels: None,
        })
    }

    pub fn with_labels(mut self, labels: Vec<VertexAddress>) -> Result<Graph> {
        if labels.len() != self.n {
            return Err(Error::Tree(format!(
                "label table has {} entries for {} vertices",
                labels.len(),
                self.n
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as sorted `(u, v)` pairs with `u < v`.
    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    pub fn labels(&self) -> Option<&[VertexAddress]> {
        self.labels.as_deref()
    }

    pub fn label(&self, v: VertexId) -> Option<&VertexAddress> {
        self.labels.as_ref().map(|t| &t[v as usize])
    }

    /// New graph with one edge removed; labels carry over.
    pub fn remove_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        let key = (u.min(v), u.max(v));
        if !self.has_edge(u, v) {
            return Err(Error::Coloring(format!("({u},{v}) is not an edge")));
        }
        let edges: Vec<_> = self.edges.iter().copied().filter(|&e| e != key).collect();
        let mut g = Graph::new(self.n, &edges)?;
        g.labels = self.labels.clone();
        Ok(g)
    }

    /// Induced subgraph on `s`, relabeled densely. Returns the subgraph and
    /// the back-map from new ids to the original ids. Duplicates in `s` are
    /// ignored; vertices keep their relative order.
    pub fn induced_subgraph(&self, s: &[VertexId]) -> Result<(Graph, Vec<VertexId>)> {
        let mut back: Vec<VertexId> = s.to_vec();
        back.sort_unstable();
        back.dedup();
        for &v in &back {
            if v as usize >= self.n {
                return Err(Error::UnknownVertex(v));
            }
        }
        let fwd: HashMap<VertexId, VertexId> = back
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as VertexId))
            .collect();
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if let (Some(&nu), Some(&nv)) = (fwd.get(&u), fwd.get(&v)) {
                edges.push((nu, nv));
            }
        }
        let mut g = Graph::new(back.len(), &edges)?;
        if let Some(labels) = &self.labels {
            g.labels = Some(back.iter().map(|&v| labels[v as usize].clone()).collect());
        }
        Ok((g, back))
    }

    /// Connected components as sorted vertex lists, ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start as VertexId];
            seen[start] = true;
            let mut stack = vec![start as VertexId];
            while let Some(v) = stack.pop() {
                for &w in self.neighbors(v) {
                    if !seen[w as usize] {
                        seen[w as usize] = true;
                        comp.push(w);
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[VertexId]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Tree("permutation length mismatch".into()));
        }
        let edges: Vec<_> = self
            .edges
            .iter()
            .map(|&(u, v)| (perm[u as usize], perm[v as usize]))
            .collect();
        Graph::new(self.n, &edges)
    }
}

// ---------------------------------------------------------------------------
// Isomorphism
// ---------------------------------------------------------------------------

/// Per-vertex refinement invariant: degree plus the sorted multiset of
/// neighbor degrees. Cheap and already discriminating on the graphs here.
fn vertex_invariants(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.vertex_count() as VertexId)
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).iter().map(|&w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect()
}

/// Exact isomorphism test by invariant-pruned backtracking, with the default
/// size cap of [`ISO_DEFAULT_CAP`] vertices.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    is_isomorphic_capped(a, b, ISO_DEFAULT_CAP)
}

pub fn is_isomorphic_capped(a: &Graph, b: &Graph, cap: usize) -> Result<bool> {
    let n = a.vertex_count();
    if n > cap || b.vertex_count() > cap {
        return Err(Error::SizeCap {
            n: n.max(b.vertex_count()),
            cap,
        });
    }
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    if n == 0 {
        return Ok(true);
    }
    let inv_a = vertex_invariants(a);
    let inv_b = vertex_invariants(b);
    let mut sorted_a = inv_a.clone();
    let mut sorted_b = inv_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(false);
    }

    // Map vertices of `a` in order of rarest invariant class, preferring
    // vertices adjacent to already-mapped ones so adjacency checks bite early.
    let mut class_size: HashMap<&(usize, Vec<usize>), usize> = HashMap::new();
    for inv in &inv_a {
        *class_size.entry(inv).or_insert(0) += 1;
    }
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    order.sort_by_key(|&v| (class_size[&inv_a[v as usize]], v));
    let mut placed = vec![false; n];
    let mut final_order = Vec::with_capacity(n);
    for _ in 0..n {
        let next = order
            .iter()
            .copied()
            .filter(|&v| !placed[v as usize])
            .min_by_key(|&v| {
                let attached = a
                    .neighbors(v)
                    .iter()
                    .filter(|&&w| placed[w as usize])
                    .count();
                (usize::MAX - attached, class_size[&inv_a[v as usize]], v)
            })
            .unwrap();
        placed[next as usize] = true;
        final_order.push(next);
    }

    let mut mapping: Vec<Option<VertexId>> = vec![None; n];
    let mut used = vec![false; n];
    Ok(iso_backtrack(
        a,
        b,
        &inv_a,
        &inv_b,
        &final_order,
        0,
        &mut mapping,
        &mut used,
    ))
}

#[allow(clippy::too_many_arguments)]
fn iso_backtrack(
    a: &Graph,
    b: &Graph,
    inv_a: &[(usize, Vec<usize>)],
    inv_b: &[(usize, Vec<usize>)],
    order: &[VertexId],
    depth: usize,
    mapping: &mut Vec<Option<VertexId>>,
    used: &mut Vec<bool>,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    'cand: for w in 0..b.vertex_count() as VertexId {
        if used[w as usize] || inv_a[v as usize] != inv_b[w as usize] {
            continue;
        }
        for &x in a.neighbors(v) {
            if let Some(y) = mapping[x as usize] {
                if !b.has_edge(w, y) {
                    continue 'cand;
                }
            }
        }
        // Non-adjacency must be preserved as well.
        let mapped_nbrs = a
            .neighbors(v)
            .iter()
            .filter(|&&x| mapping[x as usize].is_some())
            .count();
        let mapped_nbrs_b = b
            .neighbors(w)
            .iter()
            .filter(|&&y| used[y as usize])
            .count();
        if mapped_nbrs != mapped_nbrs_b {
            continue;
        }
        mapping[v as usize] = Some(w);
        used[w as usize] = true;
        if iso_backtrack(a, b, inv_a, inv_b, order, depth + 1, mapping, used) {
            return true;
        }
        mapping[v as usize] = None;
        used[w as usize] = false;
    }
    false
}

// ---------------------------------------------------------------------------
// graph6
// ---------------------------------------------------------------------------

/// Encodes the labeled graph in the standard graph6 ASCII format: a size
/// header, then the upper triangle of the adjacency matrix in column-major
/// order, six bits per character, offset by 63.
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = String::new();
    if n <= 62 {
        out.push((63 + n as u8) as char);
    } else if n <= 258_047 {
        out.push('~');
        for shift in [12, 6, 0] {
            out.push((63 + ((n >> shift) & 0x3f) as u8) as char);
        }
    } else {
        out.push('~');
        out.push('~');
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push((63 + ((n >> shift) & 0x3f) as u8) as char);
        }
    }
    let mut acc: u8 = 0;
    let mut nbits = 0;
    for j in 1..n as VertexId {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            nbits += 1;
            if nbits == 6 {
                out.push((63 + acc) as char);
                acc = 0;
                nbits = 0;
            }
        }
    }
    if nbits > 0 {
        acc <<= 6 - nbits;
        out.push((63 + acc) as char);
    }
    out
}

pub fn decode_graph6(s: &str) -> Result<Graph> {
    let bytes: Vec<u8> = s.trim_end_matches(['\n', '\r']).bytes().collect();
    for &b in &bytes {
        if !(63..=126).contains(&b) {
            return Err(Error::Graph6(format!("byte {b} outside printable range")));
        }
    }
    let (n, body) = if bytes.is_empty() {
        return Err(Error::Graph6("empty input".into()));
    } else if bytes[0] != b'~' {
        ((bytes[0] - 63) as usize, &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != b'~' {
        if bytes.len() < 4 {
            return Err(Error::Graph6("truncated 3-byte size header".into()));
        }
        let mut n = 0usize;
        for &b in &bytes[1..4] {
            n = (n << 6) | (b - 63) as usize;
        }
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(Error::Graph6("truncated 8-byte size header".into()));
        }
        let mut n = 0usize;
        for &b in &bytes[2..8] {
            n = (n << 6) | (b - 63) as usize;
        }
        (n, &bytes[8..])
    };
    let nbits = n * (n - 1) / 2;
    let expect = nbits.div_ceil(6);
    if body.len() != expect {
        return Err(Error::Graph6(format!(
            "body has {} characters, expected {expect} for n={n}",
            body.len()
        )));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    for j in 1..n as VertexId {
        for i in 0..j {
            let byte = (body[bit / 6] - 63) >> (5 - bit % 6) & 1;
            if byte == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    // Padding bits must be zero.
    while bit < body.len() * 6 {
        if (body[bit / 6] - 63) >> (5 - bit % 6) & 1 == 1 {
            return Err(Error::Graph6("nonzero padding bits".into()));
        }
        bit += 1;
    }
    Graph::new(n, &edges)
}

// ---------------------------------------------------------------------------
// DIMACS .col
// ---------------------------------------------------------------------------

/// `p edge n m` header then one `e u v` line per edge, 1-indexed with
/// `u < v`, in ascending lexicographic order.
pub fn encode_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn decode_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["p", "edge", ns, _m] => {
                n = Some(
                    ns.parse()
                        .map_err(|_| Error::Dimacs(format!("line {}: bad vertex count", lineno + 1)))?,
                );
            }
            ["e", us, vs] => {
                let u: VertexId = us
                    .parse()
                    .map_err(|_| Error::Dimacs(format!("line {}: bad endpoint", lineno + 1)))?;
                let v: VertexId = vs
                    .parse()
                    .map_err(|_| Error::Dimacs(format!("line {}: bad endpoint", lineno + 1)))?;
                if u == 0 || v == 0 {
                    return Err(Error::Dimacs(format!("line {}: endpoints are 1-indexed", lineno + 1)));
                }
                edges.push((u - 1, v - 1));
            }
            _ => return Err(Error::Dimacs(format!("line {}: unrecognized record", lineno + 1))),
        }
    }
    let n = n.ok_or_else(|| Error::Dimacs("missing p edge header".into()))?;
    Graph::new(n, &edges)
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// JSON export shape, field order fixed as `{n, edges, labels}`.
#[derive(Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<(VertexId, VertexId)>,
    pub labels: Option<Vec<String>>,
}

pub fn encode_json(g: &Graph) -> String {
    let doc = GraphJson {
        n: g.vertex_count(),
        edges: g.edges().to_vec(),
        labels: g
            .labels()
            .map(|t| t.iter().map(|a| a.to_string()).collect()),
    };
    serde_json::to_string(&doc).expect("graph json serialization")
}

pub fn decode_json(text: &str) -> Result<Graph> {
    let doc: GraphJson = serde_json::from_str(text)?;
    let mut g = Graph::new(doc.n, &doc.edges)?;
    if let Some(labels) = doc.labels {
        let parsed: Result<Vec<VertexAddress>> =
            labels.iter().map(|s| s.parse::<VertexAddress>()).collect();
        g.labels = Some(parsed?);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5() -> Graph {
        Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn build_k1_k2_c5() {
        let k1 = Graph::new(1, &[]).unwrap();
        assert_eq!(k1.vertex_count(), 1);
        assert_eq!(k1.edge_count(), 0);
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(k2.edge_count(), 1);
        let g = c5();
        assert!((0..5).all(|v| g.degree(v) == 2));
    }

    #[test]
    fn build_rejects_bad_edges() {
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(Error::EndpointOutOfRange(2, 2))
        ));
        assert!(matches!(Graph::new(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
    }

    #[test]
    fn duplicate_edges_collapse() {
        let g = Graph::new(3, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn induced_p3_from_c5() {
        let (h, back) = c5().induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(back, vec![0, 1, 2]);
        assert_eq!(h.edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn induced_whole_graph_is_identity() {
        let g = c5();
        let (h, _) = g.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(h.edges(), g.edges());
    }

    #[test]
    fn induced_unknown_vertex_errors() {
        assert!(c5().induced_subgraph(&[0, 9]).is_err());
    }

    #[test]
    fn iso_basics() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let two_k1 = Graph::new(2, &[]).unwrap();
        assert!(!is_isomorphic(&k2, &two_k1).unwrap());
        let c5b = Graph::new(5, &[(1, 2), (2, 4), (4, 3), (3, 0), (0, 1)]).unwrap();
        assert!(is_isomorphic(&c5(), &c5b).unwrap());
        // C5 vs P5 + chord-free: same size, different structure
        let p5 = Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 2)]).unwrap();
        assert!(!is_isomorphic(&c5(), &p5).unwrap());
    }

    #[test]
    fn iso_cap_refusal() {
        let a = Graph::new(5, &[]).unwrap();
        assert!(matches!(
            is_isomorphic_capped(&a, &a, 4),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn graph6_k2() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(encode_graph6(&k2), "A_");
        assert_eq!(decode_graph6("A_").unwrap(), k2);
    }

    #[test]
    fn graph6_rejects_garbage() {
        assert!(decode_graph6("").is_err());
        assert!(decode_graph6("A").is_err()); // missing body
        assert!(decode_graph6("A~~~").is_err()); // trailing junk
    }

    #[test]
    fn dimacs_shapes() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(encode_dimacs(&k2), "p edge 2 1\ne 1 2\n");
        let k1 = Graph::new(1, &[]).unwrap();
        assert_eq!(encode_dimacs(&k1), "p edge 1 0\n");
        assert_eq!(decode_dimacs("p edge 2 1\ne 1 2\n").unwrap(), k2);
    }

    #[test]
    fn json_round_trip() {
        let g = c5();
        assert_eq!(decode_json(&encode_json(&g)).unwrap(), g);
        assert_eq!(encode_json(&g), r#"{"n":5,"edges":[[0,1],[0,4],[1,2],[2,3],[3,4]],"labels":null}"#);
    }
}
