//! Indistinguishability graphs and encoding synthesis.
//!
//! Two vertices of color `p` are indistinguishable when some vertex has both
//! in its link: a process at that vertex reading only codes could not tell
//! them apart. An encoding is distinguishing exactly when it properly colors
//! every such graph.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{ChromaticComplex, Color, VertexId};
use crate::error::{Error, Result, Witness};
use crate::fvector::link_of_star_count;
use crate::subdivision::{IteratedSubdivision, Limits};

/// `G_p`: nodes are the `p`-colored vertices, edges join pairs lying in a
/// common vertex link.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndistGraph {
    pub color: Color,
    nodes: Vec<VertexId>,
    adj: Vec<Vec<usize>>,
}

impl IndistGraph {
    pub fn build(c: &ChromaticComplex, p: Color) -> Self {
        let nodes = c.vertices_of_color(p);
        let pos: BTreeMap<VertexId, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); nodes.len()];
        for t in c.vertex_ids() {
            let seen: Vec<usize> = c
                .neighbors(t)
                .iter()
                .filter_map(|w| pos.get(w).copied())
                .collect();
            for (i, &a) in seen.iter().enumerate() {
                for &b in &seen[i + 1..] {
                    adj[a].insert(b);
                    adj[b].insert(a);
                }
            }
        }
        IndistGraph {
            color: p,
            nodes,
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    /// A graph on nodes `0..n` with the given edges, for coloring routines
    /// that do not need a source complex.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &(a, b) in edges {
            if a != b {
                adj[a].insert(b);
                adj[b].insert(a);
            }
        }
        IndistGraph {
            color: Color(0),
            nodes: (0..n as u32).map(VertexId).collect(),
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
        }
    }

    pub fn nodes(&self) -> &[VertexId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(|a| a.len()).max().unwrap_or(0)
    }

    /// Edges as vertex pairs, smaller id first, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for (i, a) in self.adj.iter().enumerate() {
            for &j in a {
                if i < j {
                    out.push((self.nodes[i], self.nodes[j]));
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_proper(&self, coloring: &[u32]) -> bool {
        self.adj
            .iter()
            .enumerate()
            .all(|(i, a)| a.iter().all(|&j| coloring[i] != coloring[j]))
    }
}

/// Map from vertex to code. Codes start at 1; 0 is reserved for "unwritten".
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Encoding {
    codes: BTreeMap<VertexId, u32>,
}

impl Encoding {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (VertexId, u32)>) -> Self {
        Encoding {
            codes: pairs.into_iter().collect(),
        }
    }

    pub fn constant(c: &ChromaticComplex, code: u32) -> Self {
        Self::from_pairs(c.vertex_ids().map(|v| (v, code)))
    }

    /// Distinct code per vertex.
    pub fn injective(c: &ChromaticComplex) -> Self {
        Self::from_pairs(c.vertex_ids().enumerate().map(|(i, v)| (v, i as u32 + 1)))
    }

    pub fn set(&mut self, v: VertexId, code: u32) {
        self.codes.insert(v, code);
    }

    pub fn get(&self, v: VertexId) -> Option<u32> {
        self.codes.get(&v).copied()
    }

    pub fn code(&self, v: VertexId) -> Result<u32> {
        self.get(v).ok_or(Error::PartialEncoding(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexId, u32)> + '_ {
        self.codes.iter().map(|(&v, &c)| (v, c))
    }

    pub fn len(&self) -> usize {
        self.codes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codes.is_empty()
    }

    pub fn image(&self) -> BTreeSet<u32> {
        self.codes.values().copied().collect()
    }

    pub fn image_size(&self) -> usize {
        self.image().len()
    }

    /// Fails unless every vertex of `c` has a non-zero code.
    pub fn check_total(&self, c: &ChromaticComplex) -> Result<()> {
        for v in c.vertex_ids() {
            match self.get(v) {
                None => return Err(Error::PartialEncoding(v)),
                Some(0) => return Err(Error::ZeroCode(v)),
                Some(_) => {}
            }
        }
        Ok(())
    }
}

/// Bits per shared-memory entry: codes plus the unwritten symbol.
pub fn bits_for_image(image: usize) -> u32 {
    let symbols = image as u64 + 1;
    64 - (symbols - 1).leading_zeros()
}

/// `None` when distinguishing; otherwise the first clash found, scanning
/// observers and their neighbors in id order.
pub fn distinguishing_witness(c: &ChromaticComplex, e: &Encoding) -> Result<Option<Witness>> {
    e.check_total(c)?;
    for s in c.vertex_ids() {
        let mut seen: BTreeMap<(Color, u32), VertexId> = BTreeMap::new();
        for &w in c.neighbors(s) {
            let key = (c.color_of(w).expect("neighbor"), e.code(w)?);
            if let Some(&first) = seen.get(&key) {
                return Ok(Some(Witness {
                    observer: s,
                    first,
                    second: w,
                    code: key.1,
                }));
            }
            seen.insert(key, w);
        }
    }
    Ok(None)
}

pub fn is_distinguishable(c: &ChromaticComplex, e: &Encoding) -> Result<bool> {
    Ok(distinguishing_witness(c, e)?.is_none())
}

/// Whether `e` properly colors every `G_p`.
pub fn colors_all_graphs(c: &ChromaticComplex, e: &Encoding) -> Result<bool> {
    e.check_total(c)?;
    for p in 0..c.processes() {
        let g = IndistGraph::build(c, Color(p));
        let coloring: Vec<u32> = g.nodes().iter().map(|&v| e.get(v).unwrap_or(0)).collect();
        if !g.is_proper(&coloring) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Distinguishability and proper coloring of all `G_p`, computed separately;
/// an error if they disagree.
pub fn coloring_equivalence_check(c: &ChromaticComplex, e: &Encoding) -> Result<bool> {
    let a = is_distinguishable(c, e)?;
    let b = colors_all_graphs(c, e)?;
    if a != b {
        return Err(Error::Inconsistent(format!(
            "distinguishable = {a} but proper coloring of all graphs = {b}"
        )));
    }
    Ok(a)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GreedyOrder {
    /// Descending degree, ties by node order.
    LargestDegreeFirst,
    /// Highest saturation first, then degree, then node order. Optimal on
    /// bipartite graphs, which covers the paths arising from subdivided edges.
    #[default]
    Dsatur,
}

/// Colors `1..` assigned to the graph's nodes in node order.
pub fn greedy_coloring(g: &IndistGraph, order: GreedyOrder) -> Vec<u32> {
    let n = g.len();
    let mut colors = vec![0u32; n];
    let smallest_free = |i: usize, colors: &[u32]| {
        let used: BTreeSet<u32> = g.neighbors(i).iter().map(|&j| colors[j]).collect();
        (1..).find(|c| !used.contains(c)).expect("unbounded range")
    };
    match order {
        GreedyOrder::LargestDegreeFirst => {
            let mut idx: Vec<usize> = (0..n).collect();
            idx.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
            for i in idx {
                colors[i] = smallest_free(i, &colors);
            }
        }
        GreedyOrder::Dsatur => {
            let mut sat: Vec<BTreeSet<u32>> = vec![BTreeSet::new(); n];
            for _ in 0..n {
                let i = (0..n)
                    .filter(|&i| colors[i] == 0)
                    .max_by(|&a, &b| {
                        sat[a]
                            .len()
                            .cmp(&sat[b].len())
                            .then(g.degree(a).cmp(&g.degree(b)))
                            .then(b.cmp(&a))
                    })
                    .expect("uncolored node");
                let c = smallest_free(i, &colors);
                colors[i] = c;
                for &j in g.neighbors(i) {
                    sat[j].insert(c);
                }
            }
        }
    }
    colors
}

/// Largest clique found greedily from each node; a lower bound on the
/// chromatic number.
pub fn greedy_clique(g: &IndistGraph) -> usize {
    let mut best = usize::from(!g.is_empty());
    for start in 0..g.len() {
        let mut clique = vec![start];
        let mut cand: Vec<usize> = g.neighbors(start).to_vec();
        cand.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
        for v in cand {
            if clique.iter().all(|&u| g.neighbors(u).binary_search(&v).is_ok()) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactColoring {
    Solved(Vec<u32>),
    Skipped { nodes: usize, limit: usize },
}

impl ExactColoring {
    pub fn colors_used(&self) -> Option<usize> {
        match self {
            ExactColoring::Solved(c) => Some(c.iter().copied().collect::<BTreeSet<_>>().len()),
            ExactColoring::Skipped { .. } => None,
        }
    }
}

pub const DEFAULT_EXACT_NODE_LIMIT: usize = 20;

/// Minimum coloring by branch and bound, pruned by a clique lower bound.
pub fn exact_chromatic(g: &IndistGraph, node_limit: usize) -> ExactColoring {
    let n = g.len();
    if n > node_limit {
        return ExactColoring::Skipped {
            nodes: n,
            limit: node_limit,
        };
    }
    if n == 0 {
        return ExactColoring::Solved(Vec::new());
    }
    let mut best = greedy_coloring(g, GreedyOrder::Dsatur);
    let mut best_k = *best.iter().max().expect("non-empty") as usize;
    let lower = greedy_clique(g);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| g.degree(b).cmp(&g.degree(a)).then(a.cmp(&b)));
    let mut colors = vec![0u32; n];

    #[allow(clippy::too_many_arguments)]
    fn search(
        g: &IndistGraph,
        order: &[usize],
        depth: usize,
        used: usize,
        colors: &mut [u32],
        best: &mut Vec<u32>,
        best_k: &mut usize,
        lower: usize,
    ) {
        if *best_k <= lower {
            return;
        }
        if depth == order.len() {
            if used < *best_k {
                *best_k = used;
                best.copy_from_slice(colors);
            }
            return;
        }
        let v = order[depth];
        for c in 1..=(used + 1).min(*best_k - 1) as u32 {
            if g.neighbors(v).iter().any(|&u| colors[u] == c) {
                continue;
            }
            colors[v] = c;
            search(
                g,
                order,
                depth + 1,
                used.max(c as usize),
                colors,
                best,
                best_k,
                lower,
            );
            colors[v] = 0;
        }
    }

    search(g, &order, 0, 0, &mut colors, &mut best, &mut best_k, lower);
    ExactColoring::Solved(best)
}

/// Largest number of same-colored neighbors any vertex has. Those neighbors
/// form a clique in their color's graph.
pub fn clique_lower_bound(c: &ChromaticComplex) -> usize {
    c.vertex_ids()
        .map(|v| {
            let mut per: BTreeMap<Color, usize> = BTreeMap::new();
            for &w in c.neighbors(v) {
                *per.entry(c.color_of(w).expect("neighbor")).or_default() += 1;
            }
            per.values().copied().max().unwrap_or(0)
        })
        .max()
        .unwrap_or(0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegreeBound {
    /// `max_p Δ(G_p)`.
    pub from_graphs: usize,
    /// Largest count of same-colored vertices in the link of a vertex star.
    pub from_links: usize,
}

/// `max_p Δ(G_p)`, computed on the graphs and from links of stars; an error
/// if the two differ.
pub fn degree_upper_bound(c: &ChromaticComplex) -> Result<usize> {
    let b = degree_bounds(c)?;
    if b.from_graphs != b.from_links {
        return Err(Error::Inconsistent(format!(
            "max degree {} differs from link-of-star count {}",
            b.from_graphs, b.from_links
        )));
    }
    Ok(b.from_graphs)
}

pub fn degree_bounds(c: &ChromaticComplex) -> Result<DegreeBound> {
    let from_graphs = (0..c.processes())
        .map(|p| IndistGraph::build(c, Color(p)).max_degree())
        .max()
        .unwrap_or(0);
    let mut from_links = 0;
    for v in c.vertex_ids() {
        from_links = from_links.max(link_of_star_count(c, v)?);
    }
    Ok(DegreeBound {
        from_graphs,
        from_links,
    })
}

/// Colors every `G_p` greedily and unions the results. Isolated nodes get 1.
pub fn synth_encoding(c: &ChromaticComplex, order: GreedyOrder) -> Encoding {
    let per_color: Vec<Vec<(VertexId, u32)>> = (0..c.processes())
        .into_par_iter()
        .map(|p| {
            let g = IndistGraph::build(c, Color(p));
            let colors = greedy_coloring(&g, order);
            g.nodes().iter().copied().zip(colors).collect()
        })
        .collect();
    Encoding::from_pairs(per_color.into_iter().flatten())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundReport {
    pub round: usize,
    pub vertices: usize,
    pub clique_lb: usize,
    pub delta_plus_1: usize,
    pub image: usize,
    pub bits: u32,
    pub exact: Option<ExactColoring>,
    pub encoding: Encoding,
}

#[derive(Clone, Debug)]
pub struct EncodingSchedule {
    pub rounds: Vec<RoundReport>,
    /// Set when a round could not be built within the resource cap.
    pub truncated: Option<String>,
    pub levels: IteratedSubdivision,
}

impl EncodingSchedule {
    pub fn encoding(&self, round: usize) -> Option<&Encoding> {
        self.rounds.get(round).map(|r| &r.encoding)
    }

    pub fn encodings(&self) -> Vec<Encoding> {
        self.rounds.iter().map(|r| r.encoding.clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SynthOptions {
    pub order: GreedyOrder,
    /// Also run the exact search on every `G_p` up to this many nodes.
    pub exact_limit: Option<usize>,
}

/// Encodings for rounds `0..r`, round `r'` defined on `Ch^{r'} I`, each
/// checked to be distinguishing and to lie between the clique and degree
/// bounds.
pub fn synth_encoding_schedule(
    input: &ChromaticComplex,
    r: usize,
    limits: &Limits,
    opts: SynthOptions,
) -> Result<EncodingSchedule> {
    let mut levels = IteratedSubdivision::new(input.clone());
    let mut rounds = Vec::with_capacity(r);
    let mut truncated = None;
    for round in 0..r {
        if round > 0 {
            match levels.push_level(limits) {
                Ok(()) => {}
                Err(e @ Error::ResourceLimit { .. }) => {
                    truncated = Some(format!("stopped before round {round}: {e}"));
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let c = levels.complex();
        let encoding = synth_encoding(c, opts.order);
        if let Some(w) = distinguishing_witness(c, &encoding)? {
            return Err(Error::Inconsistent(format!(
                "synthesized encoding for round {round} is not distinguishing: {w}"
            )));
        }
        let clique_lb = clique_lower_bound(c);
        let delta_plus_1 = degree_upper_bound(c)? + 1;
        let image = encoding.image_size();
        if image < clique_lb || image > delta_plus_1 {
            return Err(Error::Inconsistent(format!(
                "round {round}: image {image} outside [{clique_lb}, {delta_plus_1}]"
            )));
        }
        let exact = opts.exact_limit.map(|limit| {
            let solved: Vec<ExactColoring> = (0..c.processes())
                .map(|p| exact_chromatic(&IndistGraph::build(c, Color(p)), limit))
                .collect();
            merge_exact(solved)
        });
        rounds.push(RoundReport {
            round,
            vertices: c.vertices().len(),
            clique_lb,
            delta_plus_1,
            image,
            bits: bits_for_image(image),
            exact,
            encoding,
        });
    }
    Ok(EncodingSchedule {
        rounds,
        truncated,
        levels,
    })
}

fn merge_exact(parts: Vec<ExactColoring>) -> ExactColoring {
    let mut all = Vec::new();
    for p in parts {
        match p {
            ExactColoring::Solved(c) => all.push(c),
            skipped => return skipped,
        }
    }
    // per-color graphs are colored independently; the image is the largest
    let widest = all
        .into_iter()
        .max_by_key(|c| c.iter().max().copied().unwrap_or(0));
    ExactColoring::Solved(widest.unwrap_or_default())
}

/// Two-process complex whose `G_{p0}` is `h`: node `i` becomes a `p0` vertex
/// with id `i`, and each edge `{i, j}` a `p1` vertex adjacent to both ends.
pub fn gadget_from_graph(nodes: usize, edges: &[(usize, usize)]) -> Result<ChromaticComplex> {
    let mut uniq: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &(a, b) in edges {
        if a == b || a >= nodes || b >= nodes {
            return Err(Error::InvalidArgument(format!("bad edge ({a}, {b})")));
        }
        uniq.insert((a.min(b), a.max(b)));
    }
    let mut colors = vec![0u32; nodes];
    colors.extend(std::iter::repeat(1).take(uniq.len()));
    let mut facets: Vec<Vec<u32>> = Vec::new();
    let mut touched = vec![false; nodes];
    for (e, &(a, b)) in uniq.iter().enumerate() {
        let ev = (nodes + e) as u32;
        facets.push(vec![a as u32, ev]);
        facets.push(vec![b as u32, ev]);
        touched[a] = true;
        touched[b] = true;
    }
    for (i, t) in touched.iter().enumerate() {
        if !t {
            facets.push(vec![i as u32]);
        }
    }
    let refs: Vec<&[u32]> = facets.iter().map(|f| f.as_slice()).collect();
    ChromaticComplex::from_parts(2, &colors, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::chromatic_subdivide;

    /// `v_p` joined to `w_q` and `t_q`.
    fn fork() -> ChromaticComplex {
        ChromaticComplex::from_parts(2, &[0, 1, 1], &[&[0, 1], &[0, 2]]).unwrap()
    }

    fn ch(c: &ChromaticComplex) -> ChromaticComplex {
        chromatic_subdivide(c, &Limits::default()).unwrap().into_complex()
    }

    #[test]
    fn graph_examples() {
        let g = IndistGraph::build(&fork(), Color(1));
        assert_eq!(g.edges(), vec![(VertexId(1), VertexId(2))]);
        let d2 = ChromaticComplex::simplex(3);
        for p in 0..3 {
            assert!(IndistGraph::build(&d2, Color(p)).edges().is_empty());
        }
        let ch1 = ch(&ChromaticComplex::simplex(2));
        let g = IndistGraph::build(&ch1, Color(0));
        assert_eq!(g.len(), 2);
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn distinguishability_examples() {
        let f = fork();
        let clash = Encoding::from_pairs([(VertexId(0), 1), (VertexId(1), 5), (VertexId(2), 5)]);
        let w = distinguishing_witness(&f, &clash).unwrap().unwrap();
        assert_eq!(
            (w.observer, w.first, w.second),
            (VertexId(0), VertexId(1), VertexId(2))
        );
        assert!(!coloring_equivalence_check(&f, &clash).unwrap());
        assert!(coloring_equivalence_check(&f, &Encoding::injective(&f)).unwrap());
        let d2 = ChromaticComplex::simplex(3);
        assert!(is_distinguishable(&d2, &Encoding::constant(&d2, 1)).unwrap());
        let partial = Encoding::from_pairs([(VertexId(0), 1)]);
        assert!(matches!(
            is_distinguishable(&f, &partial),
            Err(Error::PartialEncoding(VertexId(1)))
        ));
    }

    fn cycle(n: usize) -> IndistGraph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        IndistGraph::from_edges(n, &edges)
    }

    fn complete(n: usize) -> IndistGraph {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                edges.push((a, b));
            }
        }
        IndistGraph::from_edges(n, &edges)
    }

    fn used(c: &[u32]) -> usize {
        c.iter().collect::<BTreeSet<_>>().len()
    }

    #[test]
    fn greedy_examples() {
        for order in [GreedyOrder::LargestDegreeFirst, GreedyOrder::Dsatur] {
            assert_eq!(used(&greedy_coloring(&complete(3), order)), 3);
            assert_eq!(used(&greedy_coloring(&IndistGraph::from_edges(4, &[]), order)), 1);
            let path = IndistGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
            let c = greedy_coloring(&path, order);
            assert!(path.is_proper(&c));
            assert_eq!(used(&c), 2);
        }
    }

    #[test]
    fn exact_examples() {
        assert_eq!(exact_chromatic(&cycle(5), 20).colors_used(), Some(3));
        assert_eq!(exact_chromatic(&complete(4), 20).colors_used(), Some(4));
        assert_eq!(
            exact_chromatic(&complete(4), 3),
            ExactColoring::Skipped { nodes: 4, limit: 3 }
        );
        let c2 = ch(&ChromaticComplex::simplex(3));
        for p in 0..3 {
            let g = IndistGraph::build(&c2, Color(p));
            let exact = exact_chromatic(&g, 20).colors_used().unwrap();
            let greedy = used(&greedy_coloring(&g, GreedyOrder::LargestDegreeFirst));
            assert!(exact <= greedy);
            assert!(exact >= greedy_clique(&g));
        }
    }

    #[test]
    fn bound_examples() {
        let d2 = ChromaticComplex::simplex(3);
        assert_eq!(clique_lower_bound(&d2), 1);
        assert_eq!(degree_upper_bound(&d2).unwrap(), 0);
        let ch1 = ch(&ChromaticComplex::simplex(2));
        assert_eq!(clique_lower_bound(&ch1), 2);
        assert_eq!(degree_upper_bound(&ch1).unwrap(), 1);
        assert_eq!(clique_lower_bound(&fork()), 2);
        let ch2 = ch(&d2);
        let b = degree_bounds(&ch2).unwrap();
        assert_eq!(b.from_graphs, b.from_links);
    }

    #[test]
    fn bits_count_the_unwritten_symbol() {
        assert_eq!(bits_for_image(1), 1);
        assert_eq!(bits_for_image(2), 2);
        assert_eq!(bits_for_image(3), 2);
        assert_eq!(bits_for_image(4), 3);
    }

    #[test]
    fn schedule_examples() {
        let l = Limits::default();
        let d2 = ChromaticComplex::simplex(3);
        let s = synth_encoding_schedule(&d2, 1, &l, SynthOptions::default()).unwrap();
        assert_eq!(s.rounds[0].image, 1);
        let s = synth_encoding_schedule(&d2, 2, &l, SynthOptions::default()).unwrap();
        let r1 = &s.rounds[1];
        assert_eq!(r1.vertices, 12);
        assert!(r1.clique_lb <= r1.image && r1.image <= r1.delta_plus_1);

        let d1 = ChromaticComplex::simplex(2);
        let s = synth_encoding_schedule(&d1, 4, &l, SynthOptions::default()).unwrap();
        assert!(s.rounds.iter().all(|r| r.image <= 2));

        let capped = synth_encoding_schedule(&d2, 3, &Limits::new(20), SynthOptions::default()).unwrap();
        assert_eq!(capped.rounds.len(), 2);
        assert!(capped.truncated.is_some());

        let empty =
            synth_encoding_schedule(&ChromaticComplex::empty(2), 0, &l, SynthOptions::default()).unwrap();
        assert!(empty.rounds.is_empty());
    }

    #[test]
    fn gadget_examples() {
        let g = gadget_from_graph(2, &[(0, 1)]).unwrap();
        assert_eq!(g.vertices_of_color(Color(1)).len(), 1);
        assert_eq!(g.facets().len(), 2);
        let tri = gadget_from_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let h = IndistGraph::build(&tri, Color(0));
        assert_eq!(h.edges().len(), 3);
        let empty = gadget_from_graph(4, &[]).unwrap();
        assert!(IndistGraph::build(&empty, Color(0)).edges().is_empty());
        assert_eq!(empty.vertices().len(), 4);
    }
}
