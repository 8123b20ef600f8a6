//! Proper-coloring verification, exact chromatic number by DSATUR-ordered
//! branch and bound, CNF export of q-colorability, and the constructive
//! colorings of the twincut family: the (k)-coloring that isolates color k
//! on branch vertices, the unique-top-color colorings, the edge-deletion
//! (k-1)-colorings behind edge-criticality, and rainbow-branch extraction.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, VertexId};
use crate::tree::VertexAddress;
use crate::twincut::TwincutFamily;
use crate::{Error, Result};

/// Total color assignment, 1-based colors. Properness is not an invariant
/// of the type; check with [`is_proper`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    pub assignment: Vec<u32>,
    pub palette: u32,
}

impl Coloring {
    pub fn from_assignment(assignment: Vec<u32>) -> Coloring {
        let palette = assignment.iter().copied().max().unwrap_or(0);
        Coloring { assignment, palette }
    }
}

/// True iff the coloring is total on `g` and no edge is monochromatic.
pub fn is_proper(g: &Graph, c: &Coloring) -> Result<bool> {
    if c.assignment.len() != g.vertex_count() || c.assignment.contains(&0) {
        return Err(Error::Coloring("coloring is not total".into()));
    }
    Ok(g.edges()
        .iter()
        .all(|&(u, v)| c.assignment[u as usize] != c.assignment[v as usize]))
}

// ---------------------------------------------------------------------------
// Exact chromatic number
// ---------------------------------------------------------------------------

/// Resource limits for the branch-and-bound search.
#[derive(Debug, Clone, Copy, Default)]
pub struct Budget {
    pub max_nodes: Option<u64>,
    pub max_millis: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchStats {
    pub nodes: u64,
    pub millis: u128,
}

#[derive(Debug, Clone)]
pub struct ChiResult {
    pub chi: u32,
    pub witness: Coloring,
    pub stats: SearchStats,
}

/// Either an exact answer with a witness, or explicit bounds when the
/// budget ran out. The two are never conflated.
#[derive(Debug, Clone)]
pub enum ChiOutcome {
    Exact(ChiResult),
    Unknown {
        lower: u32,
        upper: u32,
        best: Coloring,
        stats: SearchStats,
    },
}

struct Searcher<'a> {
    g: &'a Graph,
    colors: Vec<u32>,
    uncolored: usize,
    max_used: u32,
    best_ub: u32,
    best: Vec<u32>,
    lb: u32,
    nodes: u64,
    budget: Budget,
    started: Instant,
    aborted: bool,
}

impl Searcher<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.aborted {
            return true;
        }
        if let Some(maxn) = self.budget.max_nodes {
            if self.nodes > maxn {
                self.aborted = true;
            }
        }
        if !self.aborted && self.nodes.is_multiple_of(256) {
            if let Some(ms) = self.budget.max_millis {
                if self.started.elapsed().as_millis() as u64 > ms {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn select_vertex(&self) -> VertexId {
        // Max saturation, then max degree, then lowest id.
        let mut best: Option<(usize, usize, std::cmp::Reverse<VertexId>)> = None;
        let mut pick = 0;
        for v in 0..self.g.vertex_count() as VertexId {
            if self.colors[v as usize] != 0 {
                continue;
            }
            let mut seen: Vec<u32> = self.g.neighbors(v)
                .iter()
                .map(|&w| self.colors[w as usize])
                .filter(|&c| c != 0)
                .collect();
            seen.sort_unstable();
            seen.dedup();
            let key = (seen.len(), self.g.degree(v), std::cmp::Reverse(v));
            if best.as_ref().is_none_or(|b| key > *b) {
                best = Some(key);
                pick = v;
            }
        }
        pick
    }

    fn search(&mut self) {
        self.nodes += 1;
        if self.out_of_budget() {
            return;
        }
        if self.uncolored == 0 {
            if self.max_used < self.best_ub {
                self.best_ub = self.max_used;
                self.best = self.colors.clone();
            }
            return;
        }
        let v = self.select_vertex();
        let cap = (self.max_used + 1).min(self.best_ub - 1);
        for c in 1..=cap {
            if c >= self.best_ub {
                break;
            }
            let ok = self
                .g
                .neighbors(v)
                .iter()
                .all(|&w| self.colors[w as usize] != c);
            if !ok {
                continue;
            }
            let prev_max = self.max_used;
            self.colors[v as usize] = c;
            self.max_used = self.max_used.max(c);
            self.uncolored -= 1;
            self.search();
            self.uncolored += 1;
            self.colors[v as usize] = 0;
            self.max_used = prev_max;
            if self.best_ub == self.lb || self.aborted {
                return;
            }
        }
    }
}

/// Greedy clique from the highest-degree vertex; a cheap lower bound.
fn greedy_clique(g: &Graph) -> Vec<VertexId> {
    if g.vertex_count() == 0 {
        return Vec::new();
    }
    let start = (0..g.vertex_count() as VertexId)
        .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)))
        .unwrap();
    let mut clique = vec![start];
    loop {
        let next = (0..g.vertex_count() as VertexId)
            .filter(|&v| !clique.contains(&v) && clique.iter().all(|&u| g.has_edge(u, v)))
            .max_by_key(|&v| (g.degree(v), std::cmp::Reverse(v)));
        match next {
            Some(v) => clique.push(v),
            None => return clique,
        }
    }
}

/// Greedy DSATUR coloring for an initial upper bound.
fn greedy_dsatur(g: &Graph) -> Vec<u32> {
    let n = g.vertex_count();
    let mut colors = vec![0u32; n];
    for _ in 0..n {
        let v = (0..n as VertexId)
            .filter(|&v| colors[v as usize] == 0)
            .max_by_key(|&v| {
                let mut seen: Vec<u32> = g
                    .neighbors(v)
                    .iter()
                    .map(|&w| colors[w as usize])
                    .filter(|&c| c != 0)
                    .collect();
                seen.sort_unstable();
                seen.dedup();
                (seen.len(), g.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        let mut c = 1;
        while g.neighbors(v).iter().any(|&w| colors[w as usize] == c) {
            c += 1;
        }
        colors[v as usize] = c;
    }
    colors
}

/// Exact chromatic number with a proper witness. Components are solved
/// independently and combined; within a component with at least one edge,
/// the endpoints of its first edge are pre-assigned colors 1 and 2.
pub fn chromatic_number(g: &Graph, budget: Budget) -> ChiOutcome {
    let started = Instant::now();
    if g.vertex_count() == 0 {
        return ChiOutcome::Exact(ChiResult {
            chi: 0,
            witness: Coloring::from_assignment(Vec::new()),
            stats: SearchStats::default(),
        });
    }
    let mut chi = 0u32;
    let mut lower = 0u32;
    let mut upper = 0u32;
    let mut assignment = vec![0u32; g.vertex_count()];
    let mut nodes = 0u64;
    let mut exact = true;
    for comp in g.components() {
        let (sub, back) = g.induced_subgraph(&comp).expect("component vertices");
        let outcome = solve_component(&sub, budget);
        let (comp_chi_lo, comp_chi_hi, witness, comp_nodes, comp_exact) = outcome;
        nodes += comp_nodes;
        for (i, &orig) in back.iter().enumerate() {
            assignment[orig as usize] = witness[i];
        }
        chi = chi.max(comp_chi_hi);
        lower = lower.max(comp_chi_lo);
        upper = upper.max(comp_chi_hi);
        exact &= comp_exact;
    }
    let stats = SearchStats {
        nodes,
        millis: started.elapsed().as_millis(),
    };
    let witness = Coloring::from_assignment(assignment);
    if exact {
        ChiOutcome::Exact(ChiResult { chi, witness, stats })
    } else {
        ChiOutcome::Unknown {
            lower,
            upper,
            best: witness,
            stats,
        }
    }
}

/// Returns (lower, upper, witness-for-upper, nodes, exact).
fn solve_component(g: &Graph, budget: Budget) -> (u32, u32, Vec<u32>, u64, bool) {
    let n = g.vertex_count();
    if g.edge_count() == 0 {
        return (1, 1, vec![1; n], 0, true);
    }
    let clique = greedy_clique(g);
    let lb = clique.len() as u32;
    let greedy = greedy_dsatur(g);
    let ub = *greedy.iter().max().unwrap();
    if ub == lb {
        return (lb, ub, greedy, 0, true);
    }
    let mut s = Searcher {
        g,
        colors: vec![0; n],
        uncolored: n,
        max_used: 0,
        best_ub: ub,
        best: greedy,
        lb,
        nodes: 0,
        budget,
        started: Instant::now(),
        aborted: false,
    };
    // Symmetry breaking: the first edge is bichromatic in any proper
    // coloring, so colors 1,2 can be fixed on its endpoints.
    let (eu, ev) = g.edges()[0];
    s.colors[eu as usize] = 1;
    s.colors[ev as usize] = 2;
    s.max_used = 2;
    s.uncolored -= 2;
    s.search();
    let exact = !s.aborted;
    let lower = if exact { s.best_ub } else { s.lb };
    (lower, s.best_ub, s.best, s.nodes, exact)
}

// ---------------------------------------------------------------------------
// CNF export
// ---------------------------------------------------------------------------

/// DIMACS CNF for q-colorability. Variable `x_{v,c}` has index
/// `(v-1)*q + c` for 1-based `v`. Clause order: one at-least-one clause per
/// vertex (ascending), then one conflict clause per edge per color (edge
/// lex, color inner), then two symmetry unit clauses fixing the first
/// edge's endpoints to colors 1 and 2 (emitted when the graph has an edge
/// and q >= 2).
pub fn export_kcolor_cnf(g: &Graph, q: u32) -> String {
    let n = g.vertex_count();
    let m = g.edge_count();
    let var = |v: VertexId, c: u32| -> i64 { v as i64 * q as i64 + c as i64 };
    let units = m > 0 && q >= 2;
    let clause_count = n + m * q as usize + if units { 2 } else { 0 };
    let mut out = format!("p cnf {} {}\n", n * q as usize, clause_count);
    for v in 0..n as VertexId {
        for c in 1..=q {
            out.push_str(&var(v, c).to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    for &(u, v) in g.edges() {
        for c in 1..=q {
            out.push_str(&format!("-{} -{} 0\n", var(u, c), var(v, c)));
        }
    }
    if units {
        let (u, v) = g.edges()[0];
        out.push_str(&format!("{} 0\n", var(u, 1)));
        out.push_str(&format!("{} 0\n", var(v, 2)));
    }
    out
}

// ---------------------------------------------------------------------------
// Constructive colorings of the twincut family
// ---------------------------------------------------------------------------

/// The inductive k-coloring of `G_k`: all branch vertices get color k, and
/// each child graph (a copy of some `G_j`, j < k) is colored by the same
/// scheme with colors `1..=j`.
pub fn constructive_coloring(family: &TwincutFamily, k: u32) -> Result<Coloring> {
    let mut memo: Vec<Vec<u32>> = Vec::with_capacity(k as usize);
    for level in 1..=k {
        let assignment = constructive_level(family, level, &memo)?;
        memo.push(assignment);
    }
    Ok(Coloring::from_assignment(memo.pop().unwrap()))
}

fn constructive_level(family: &TwincutFamily, k: u32, memo: &[Vec<u32>]) -> Result<Vec<u32>> {
    let tg = family.level(k)?;
    let n = tg.graph.vertex_count();
    let mut colors = vec![0u32; n];
    for v in 0..n as VertexId {
        colors[v as usize] = match tg.address_of(v)? {
            VertexAddress::Tree(p) if p.is_empty() => 1,
            VertexAddress::Tree(p) => {
                // The parent sits at level p.len(), carrying a copy of
                // G_{p.len()+1}; this node is vertex p.last() of the copy.
                let copy_level = p.len() + 1;
                memo[copy_level - 1][*p.last().unwrap() as usize]
            }
            VertexAddress::BranchV(_) => k,
        };
    }
    Ok(colors)
}

/// A branch whose tree vertices got pairwise distinct colors, together
/// with its branch vertex (whose color lies outside that set).
#[derive(Debug, Clone)]
pub struct RainbowBranch {
    /// Arena node ids of the branch, root first.
    pub nodes: Vec<usize>,
    pub branch_vertex: VertexId,
    pub tree_colors: Vec<u32>,
}

/// Greedy descent: at each internal node, its children induce a copy of
/// some `G_j` that the colors seen so far cannot properly color, so some
/// child carries a fresh color; the first such child (in id order) extends
/// the path. Requires a proper coloring.
pub fn rainbow_branch(family: &TwincutFamily, k: u32, c: &Coloring) -> Result<RainbowBranch> {
    if k < 2 {
        return Err(Error::Index(k, "rainbow branches need k >= 2".into()));
    }
    let tg = family.level(k)?;
    if !is_proper(&tg.graph, c)? {
        return Err(Error::Coloring("rainbow_branch requires a proper coloring".into()));
    }
    let tree = family.tree(k)?;
    let mut node = tree.root();
    let mut nodes = vec![node];
    let mut seen = vec![c.assignment[node]];
    while !tree.is_leaf(node) {
        let next = tree
            .children(node)
            .iter()
            .copied()
            .find(|&ch| !seen.contains(&c.assignment[ch]))
            .ok_or_else(|| {
                Error::Coloring(
                    "no fresh-colored child; internal consistency fault for a proper coloring"
                        .into(),
                )
            })?;
        seen.push(c.assignment[next]);
        nodes.push(next);
        node = next;
    }
    let leaf_path = tree.path(node);
    let branch_vertex = tg.id_of(&VertexAddress::BranchV(leaf_path))?;
    let bv_color = c.assignment[branch_vertex as usize];
    if seen.contains(&bv_color) {
        return Err(Error::Coloring(
            "branch vertex repeats a branch color; coloring was not proper".into(),
        ));
    }
    Ok(RainbowBranch {
        nodes,
        branch_vertex,
        tree_colors: seen,
    })
}

/// A proper k-coloring of `G_k` in which color k appears exactly once, at
/// `v`. When `v` is a branch vertex, its neighbor at tree level i has
/// color i for every i.
pub fn unique_top_coloring(family: &TwincutFamily, k: u32, v: VertexId) -> Result<Coloring> {
    let tg = family.level(k)?;
    if v as usize >= tg.graph.vertex_count() {
        return Err(Error::UnknownVertex(v));
    }
    if k == 1 {
        return Ok(Coloring::from_assignment(vec![1]));
    }
    match tg.address_of(v)?.clone() {
        VertexAddress::BranchV(leaf_path) => unique_top_branch(family, k, &leaf_path),
        VertexAddress::Tree(p) => {
            // Pick the first (DFS) branch through v and swap its branch
            // vertex's color with v's.
            let mut leaf_path = p;
            while leaf_path.len() < k as usize - 2 {
                leaf_path.push(0);
            }
            let b = tg.id_of(&VertexAddress::BranchV(leaf_path.clone()))?;
            let mut c = unique_top_branch(family, k, &leaf_path)?;
            c.assignment.swap(v as usize, b as usize);
            Ok(c)
        }
    }
}

/// The branch-vertex case of the unique-top construction: root colored 1,
/// each on-branch child graph given a unique-top coloring pinning the next
/// branch node, off-branch child graphs colored constructively, every other
/// branch vertex recolored with its smallest free color below k, and the
/// target branch vertex colored k.
fn unique_top_branch(family: &TwincutFamily, k: u32, leaf_path: &[u32]) -> Result<Coloring> {
    let tg = family.level(k)?;
    let tree = family.tree(k)?;
    let n = tg.graph.vertex_count();
    let mut colors = vec![0u32; n];
    colors[tree.root()] = 1;
    for node in 0..tree.node_count() {
        if tree.is_leaf(node) {
            continue;
        }
        let path = tree.path(node);
        let level = path.len() + 1;
        let on_branch = leaf_path.len() >= path.len() && leaf_path[..path.len()] == path[..];
        let sub: Vec<u32> = if on_branch {
            let next_idx = leaf_path[path.len()];
            unique_top_coloring(family, level as u32 + 1, next_idx)?.assignment
        } else {
            constructive_coloring(family, level as u32 + 1)?.assignment
        };
        for (ci, &child) in tree.children(node).iter().enumerate() {
            colors[child] = sub[ci];
        }
    }
    let target = tg.id_of(&VertexAddress::BranchV(leaf_path.to_vec()))?;
    for v in 0..n as VertexId {
        if v != target && tg.is_branch_vertex(v) {
            colors[v as usize] = smallest_free_color(&tg.graph, &colors, v, k - 1)?;
        }
    }
    colors[target as usize] = k;
    Ok(Coloring::from_assignment(colors))
}

fn smallest_free_color(g: &Graph, colors: &[u32], v: VertexId, max: u32) -> Result<u32> {
    (1..=max)
        .find(|&c| g.neighbors(v).iter().all(|&w| colors[w as usize] != c))
        .ok_or_else(|| {
            Error::Coloring(format!(
                "no free color in 1..={max} for vertex {v}; constructive path failed"
            ))
        })
}

/// Which procedure produced an edge-deletion coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeletionPath {
    Constructive,
    SolverFallback,
}

/// A proper (k-1)-coloring of `G_k` minus one edge. Follows the critical
/// construction (recolor a now-underfull branch vertex, or recursively
/// recolor the child graph containing the edge), always post-verifies, and
/// falls back to the exact solver when the construction leaves a conflict.
pub fn edge_deleted_coloring(
    family: &TwincutFamily,
    k: u32,
    u: VertexId,
    v: VertexId,
    budget: Budget,
) -> Result<(Coloring, DeletionPath)> {
    if k < 2 {
        return Err(Error::Index(k, "G_1 has no edges".into()));
    }
    let tg = family.level(k)?;
    if !tg.graph.has_edge(u, v) {
        return Err(Error::Coloring(format!("({u},{v}) is not an edge of G_{k}")));
    }
    let deleted = tg.graph.remove_edge(u, v)?;
    if let Ok(c) = constructive_edge_deleted(family, k, u, v, budget) {
        if c.palette < k && is_proper(&deleted, &c)? {
            return Ok((c, DeletionPath::Constructive));
        }
    }
    match chromatic_number(&deleted, budget) {
        ChiOutcome::Exact(r) if r.chi < k => Ok((r.witness, DeletionPath::SolverFallback)),
        ChiOutcome::Exact(r) => Err(Error::Coloring(format!(
            "G_{k} minus ({u},{v}) has chromatic number {}, not {}",
            r.chi,
            k - 1
        ))),
        ChiOutcome::Unknown { .. } => Err(Error::Coloring(
            "solver fallback exhausted its budget".into(),
        )),
    }
}

fn constructive_edge_deleted(
    family: &TwincutFamily,
    k: u32,
    u: VertexId,
    v: VertexId,
    budget: Budget,
) -> Result<Coloring> {
    let tg = family.level(k)?;
    let branch_endpoint = [u, v].into_iter().find(|&x| tg.is_branch_vertex(x));
    if let Some(b) = branch_endpoint {
        let other = if b == u { v } else { u };
        let mut c = unique_top_coloring(family, k, b)?;
        // b keeps k-2 neighbors after the deletion, so a color below k is free.
        let free = (1..k)
            .find(|&col| {
                tg.graph
                    .neighbors(b)
                    .iter()
                    .all(|&w| w == other || c.assignment[w as usize] != col)
            })
            .ok_or_else(|| Error::Coloring("no free color for deleted-edge branch vertex".into()))?;
        c.assignment[b as usize] = free;
        return Ok(Coloring::from_assignment(c.assignment));
    }
    // Both endpoints are tree nodes, hence siblings in some child graph.
    let tree = family.tree(k)?;
    let w = tree
        .parent(u as usize)
        .filter(|&p| tree.parent(v as usize) == Some(p))
        .ok_or_else(|| Error::Coloring("adjacent tree nodes must be siblings".into()))?;
    let level = tree.path(w).len() + 1;
    let copy_k = level as u32 + 1;
    let mut leaf_path = tree.path(w);
    while leaf_path.len() < k as usize - 2 {
        leaf_path.push(0);
    }
    let b = tg.id_of(&VertexAddress::BranchV(leaf_path.clone()))?;
    let mut c = unique_top_branch(family, k, &leaf_path)?;
    let pu = tree.children(w).iter().position(|&x| x == u as usize).unwrap() as VertexId;
    let pv = tree.children(w).iter().position(|&x| x == v as usize).unwrap() as VertexId;
    let (sub, _) = edge_deleted_coloring(family, copy_k, pu, pv, budget)?;
    for (ci, &child) in tree.children(w).iter().enumerate() {
        c.assignment[child] = sub.assignment[ci];
    }
    c.assignment[b as usize] = copy_k;
    for x in 0..tg.graph.vertex_count() as VertexId {
        if x != b && tg.is_branch_vertex(x) {
            c.assignment[x as usize] = smallest_free_color(&tg.graph, &c.assignment, x, k - 1)?;
        }
    }
    Ok(Coloring::from_assignment(c.assignment))
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct ColoringJson {
    palette: u32,
    assignment: BTreeMap<String, u32>,
}

/// Serializes a coloring keyed by vertex address when the graph carries
/// labels, by numeric id otherwise.
pub fn encode_coloring_json(g: &Graph, c: &Coloring) -> String {
    let assignment = c
        .assignment
        .iter()
        .enumerate()
        .map(|(v, &col)| {
            let key = match g.label(v as VertexId) {
                Some(a) => a.to_string(),
                None => v.to_string(),
            };
            (key, col)
        })
        .collect();
    serde_json::to_string(&ColoringJson {
        palette: c.palette,
        assignment,
    })
    .expect("coloring json")
}

pub fn decode_coloring_json(g: &Graph, text: &str) -> Result<Coloring> {
    let doc: ColoringJson = serde_json::from_str(text)?;
    let mut assignment = vec![0u32; g.vertex_count()];
    for (key, col) in doc.assignment {
        let id = match key.parse::<VertexId>() {
            Ok(id) => id,
            Err(_) => {
                let addr: VertexAddress = key.parse()?;
                let labels = g
                    .labels()
                    .ok_or_else(|| Error::Coloring("address keys on an unlabeled graph".into()))?;
                labels
                    .iter()
                    .position(|a| *a == addr)
                    .ok_or_else(|| Error::Coloring(format!("no vertex at address {addr}")))?
                    as VertexId
            }
        };
        if id as usize >= g.vertex_count() {
            return Err(Error::UnknownVertex(id));
        }
        assignment[id as usize] = col;
    }
    if assignment.contains(&0) {
        return Err(Error::Coloring("coloring file leaves vertices unassigned".into()));
    }
    Ok(Coloring::from_assignment(assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twincut;

    fn c5() -> Graph {
        Graph::new(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap()
    }

    #[test]
    fn is_proper_basics() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        assert!(!is_proper(&k2, &Coloring::from_assignment(vec![1, 1])).unwrap());
        assert!(is_proper(&c5(), &Coloring::from_assignment(vec![1, 2, 1, 2, 3])).unwrap());
        assert!(is_proper(&c5(), &Coloring::from_assignment(vec![1, 2, 1, 2, 0])).is_err());
    }

    #[test]
    fn chi_small_graphs() {
        let cases = [
            (Graph::new(1, &[]).unwrap(), 1),
            (Graph::new(2, &[(0, 1)]).unwrap(), 2),
            (c5(), 3),
            (Graph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap(), 3),
            // disjoint K2 and K3
            (Graph::new(5, &[(0, 1), (2, 3), (3, 4), (2, 4)]).unwrap(), 3),
        ];
        for (g, want) in cases {
            match chromatic_number(&g, Budget::default()) {
                ChiOutcome::Exact(r) => {
                    assert_eq!(r.chi, want);
                    assert!(is_proper(&g, &r.witness).unwrap());
                    assert_eq!(r.witness.palette, want);
                }
                other => panic!("expected exact result, got {other:?}"),
            }
        }
    }

    #[test]
    fn chi_twincut_levels() {
        for k in 1..=4u32 {
            let g = twincut::build_graph(k).unwrap();
            match chromatic_number(&g, Budget::default()) {
                ChiOutcome::Exact(r) => assert_eq!(r.chi, k, "chi(G_{k})"),
                other => panic!("G_{k}: {other:?}"),
            }
        }
    }

    #[test]
    fn budget_exhaustion_reports_unknown() {
        let g = twincut::build_graph(4).unwrap();
        match chromatic_number(&g, Budget { max_nodes: Some(1), max_millis: None }) {
            ChiOutcome::Unknown { lower, upper, best, .. } => {
                assert!(lower <= upper);
                assert!(is_proper(&g, &best).unwrap());
            }
            ChiOutcome::Exact(_) => panic!("one-node budget should not finish"),
        }
    }

    #[test]
    fn cnf_k2_one_color() {
        let k2 = Graph::new(2, &[(0, 1)]).unwrap();
        let cnf = export_kcolor_cnf(&k2, 1);
        assert_eq!(cnf, "p cnf 2 3\n1 0\n2 0\n-1 -2 0\n");
    }

    #[test]
    fn cnf_counts() {
        let g = c5();
        let cnf = export_kcolor_cnf(&g, 3);
        let header = cnf.lines().next().unwrap();
        assert_eq!(header, "p cnf 15 22"); // 5 + 5*3 + 2
        assert_eq!(cnf.lines().count(), 23);
    }

    #[test]
    fn constructive_is_proper_with_exact_palette() {
        let family = TwincutFamily::new(5).unwrap();
        for k in 1..=5u32 {
            let c = constructive_coloring(&family, k).unwrap();
            let g = family.graph(k).unwrap();
            assert!(is_proper(g, &c).unwrap(), "k={k}");
            assert_eq!(c.palette, k, "k={k}");
            if k >= 2 {
                let tg = family.level(k).unwrap();
                for v in 0..g.vertex_count() as VertexId {
                    if c.assignment[v as usize] == k {
                        assert!(tg.is_branch_vertex(v), "color {k} off the branch vertices");
                    }
                }
            }
        }
    }

    #[test]
    fn rainbow_branch_on_constructive_colorings() {
        let family = TwincutFamily::new(4).unwrap();
        for k in 2..=4u32 {
            let c = constructive_coloring(&family, k).unwrap();
            let rb = rainbow_branch(&family, k, &c).unwrap();
            assert_eq!(rb.tree_colors.len(), k as usize - 1);
            let mut distinct = rb.tree_colors.clone();
            distinct.sort_unstable();
            distinct.dedup();
            assert_eq!(distinct.len(), k as usize - 1);
            assert!(!rb.tree_colors.contains(&c.assignment[rb.branch_vertex as usize]));
        }
    }

    #[test]
    fn rainbow_rejects_improper() {
        let family = TwincutFamily::new(3).unwrap();
        let bad = Coloring::from_assignment(vec![1; 5]);
        assert!(rainbow_branch(&family, 3, &bad).is_err());
    }

    #[test]
    fn unique_top_small() {
        let family = TwincutFamily::new(3).unwrap();
        let g = family.graph(3).unwrap();
        for v in 0..5 {
            let c = unique_top_coloring(&family, 3, v).unwrap();
            assert!(is_proper(g, &c).unwrap());
            let tops: Vec<_> = (0..5).filter(|&x| c.assignment[x as usize] == 3).collect();
            assert_eq!(tops, vec![v]);
        }
        // Level law at a branch vertex: neighbors colored by their level.
        let tg = family.level(3).unwrap();
        let bv = (0..5).find(|&v| tg.is_branch_vertex(v)).unwrap();
        let c = unique_top_coloring(&family, 3, bv).unwrap();
        for &w in g.neighbors(bv) {
            let level = match tg.address_of(w).unwrap() {
                VertexAddress::Tree(p) => p.len() + 1,
                _ => unreachable!("branch vertices are independent"),
            };
            assert_eq!(c.assignment[w as usize], level as u32);
        }
    }

    #[test]
    fn edge_deleted_k3_all_edges() {
        let family = TwincutFamily::new(3).unwrap();
        let g = family.graph(3).unwrap().clone();
        for &(u, v) in g.edges() {
            let (c, _) = edge_deleted_coloring(&family, 3, u, v, Budget::default()).unwrap();
            assert!(c.palette <= 2);
            assert!(is_proper(&g.remove_edge(u, v).unwrap(), &c).unwrap());
        }
    }

    #[test]
    fn edge_deleted_k2() {
        let family = TwincutFamily::new(2).unwrap();
        let (c, _) = edge_deleted_coloring(&family, 2, 0, 1, Budget::default()).unwrap();
        assert_eq!(c.palette, 1);
    }

    #[test]
    fn edge_deleted_rejects_non_edge() {
        let family = TwincutFamily::new(3).unwrap();
        assert!(edge_deleted_coloring(&family, 3, 0, 1, Budget::default()).is_err());
    }

    #[test]
    fn coloring_json_round_trip() {
        let family = TwincutFamily::new(3).unwrap();
        let g = family.graph(3).unwrap();
        let c = constructive_coloring(&family, 3).unwrap();
        let s = encode_coloring_json(g, &c);
        assert_eq!(decode_coloring_json(g, &s).unwrap(), c);
    }
}
