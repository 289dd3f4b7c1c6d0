//! The standard chromatic subdivision `Ch` and its iterates.
//!
//! A vertex of `Ch A` is a pair `(c, σ)` where `σ` is a simplex of `A` that
//! contains a vertex of color `c`. Facets are generated per facet `F` of `A`
//! from ordered partitions `(B_1, …, B_m)` of its vertices: each `c ∈ B_j`
//! becomes `(c, B_1 ∪ … ∪ B_j)`. Pairs equal as `(color, carrier)` are the
//! same vertex, which glues adjacent facets together.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::complex::{ChromaticComplex, Color, Simplex, Vertex, VertexId};
use crate::error::{Error, Result};
use crate::partition::{fubini, ordered_partitions};

pub const DEFAULT_MAX_FACETS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_facets: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_facets: DEFAULT_MAX_FACETS,
        }
    }
}

impl Limits {
    pub fn new(max_facets: usize) -> Self {
        Limits { max_facets }
    }

    pub(crate) fn check(&self, what: &str, needed: &BigUint) -> Result<()> {
        if needed > &BigUint::from(self.max_facets) {
            let needed = u128::try_from(needed).unwrap_or(u128::MAX);
            return Err(Error::ResourceLimit {
                what: what.to_string(),
                needed,
                cap: self.max_facets,
            });
        }
        Ok(())
    }
}

/// Number of facets `Ch c` will have.
pub fn predicted_facets(c: &ChromaticComplex) -> BigUint {
    c.facets().iter().map(|f| fubini(f.len())).sum()
}

type Key = (Color, Simplex);

/// `Ch A` together with the carrier of every new vertex.
#[derive(Clone, Debug)]
pub struct Subdivision {
    complex: ChromaticComplex,
    carriers: Vec<Simplex>,
    index: HashMap<Key, VertexId>,
}

impl Subdivision {
    pub fn complex(&self) -> &ChromaticComplex {
        &self.complex
    }

    pub fn into_complex(self) -> ChromaticComplex {
        self.complex
    }

    /// The simplex of the parent complex that `v` lies in.
    pub fn carrier_of(&self, v: VertexId) -> Result<&Simplex> {
        self.carriers.get(v.index()).ok_or(Error::ForeignVertex(v))
    }

    /// Carrier of a simplex: the largest carrier among its vertices (carriers
    /// within a simplex are nested).
    pub fn carrier_of_simplex(&self, s: &Simplex) -> Result<Simplex> {
        let mut best = Simplex::empty();
        for v in s.vertices() {
            let c = self.carrier_of(v)?;
            if c.len() > best.len() {
                best = c.clone();
            }
        }
        Ok(best)
    }

    pub fn vertex_for(&self, color: Color, carrier: &Simplex) -> Option<VertexId> {
        self.index.get(&(color, carrier.clone())).copied()
    }

    /// Vertices whose carrier is `parent_facet`.
    pub fn central_simplex(&self, parent_facet: &Simplex) -> Result<Simplex> {
        let mut pairs = Vec::new();
        for c in parent_facet.colors() {
            match self.vertex_for(c, parent_facet) {
                Some(v) => pairs.push((c, v)),
                None => return Err(Error::NotAFace(parent_facet.to_string())),
            }
        }
        Ok(Simplex::from_sorted(pairs))
    }
}

fn facet_keys(f: &Simplex) -> Vec<Vec<Key>> {
    ordered_partitions(f.pairs())
        .into_iter()
        .map(|blocks| {
            let mut acc: Vec<(Color, VertexId)> = Vec::new();
            let mut keys = Vec::with_capacity(f.len());
            for block in blocks {
                acc.extend(block.iter().copied());
                acc.sort_unstable();
                let carrier = Simplex::from_sorted(acc.clone());
                for &(c, _) in &block {
                    keys.push((c, carrier.clone()));
                }
            }
            keys.sort_unstable_by_key(|k| k.0);
            keys
        })
        .collect()
}

fn assemble(parent: &ChromaticComplex, facets: Vec<Vec<Key>>) -> Subdivision {
    let mut keys: Vec<Key> = facets.iter().flatten().cloned().collect();
    keys.sort_unstable_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)));
    keys.dedup();
    let index: HashMap<Key, VertexId> = keys
        .iter()
        .enumerate()
        .map(|(i, k)| (k.clone(), VertexId(i as u32)))
        .collect();
    let vertices = keys
        .iter()
        .enumerate()
        .map(|(i, (c, carrier))| Vertex {
            id: VertexId(i as u32),
            color: *c,
            label: subdiv_label(parent, *c, carrier),
        })
        .collect();
    let mut simplices: Vec<Simplex> = facets
        .into_iter()
        .map(|f| Simplex::from_sorted(f.into_iter().map(|k| (k.0, index[&k])).collect()))
        .collect();
    simplices.sort_unstable();
    simplices.dedup();
    let complex = ChromaticComplex::from_checked(parent.processes(), vertices, simplices);
    Subdivision {
        complex,
        carriers: keys.into_iter().map(|k| k.1).collect(),
        index,
    }
}

fn subdiv_label(parent: &ChromaticComplex, c: Color, carrier: &Simplex) -> String {
    let inner: Vec<&str> = carrier
        .vertices()
        .map(|v| parent.label_of(v).unwrap_or("?"))
        .collect();
    format!("({c}, [{}])", inner.join(", "))
}

/// `Ch c` built from ordered partitions of each facet.
pub fn chromatic_subdivide(c: &ChromaticComplex, limits: &Limits) -> Result<Subdivision> {
    limits.check("chromatic subdivision", &predicted_facets(c))?;
    let per_facet: Vec<Vec<Vec<Key>>> = c.facets().par_iter().map(facet_keys).collect();
    Ok(assemble(c, per_facet.into_iter().flatten().collect()))
}

fn compatible(a: &Key, b: &Key) -> bool {
    if a.0 == b.0 {
        return false;
    }
    let (small, large) = if a.1.len() <= b.1.len() { (a, b) } else { (b, a) };
    if !small.1.is_face_of(&large.1) {
        return false;
    }
    !small.1.has_color(large.0) || small.1 == large.1
}

/// Reference construction of `Ch c` from the pairwise rule on `(color,
/// carrier)` pairs, with facets found as maximal cliques. Exponential; meant
/// for cross-checking [`chromatic_subdivide`] on small inputs.
///
/// Two vertices `(c, σ)`, `(c', σ')` with `σ ⊆ σ'` span an edge iff `c ≠ c'`
/// and, when `c'` already appears in `σ`, the carriers are equal.
pub fn subdivide_by_rule(c: &ChromaticComplex) -> Subdivision {
    let mut keys: Vec<Key> = Vec::new();
    for s in c.all_faces() {
        for col in s.colors() {
            keys.push((col, s.clone()));
        }
    }
    keys.sort();
    keys.dedup();
    let n = keys.len();
    let adj: Vec<HashSet<usize>> = (0..n)
        .map(|i| {
            (0..n)
                .filter(|&j| j != i && compatible(&keys[i], &keys[j]))
                .collect()
        })
        .collect();
    let mut cliques = Vec::new();
    bron_kerbosch(&adj, Vec::new(), (0..n).collect(), HashSet::new(), &mut cliques);
    let facets = cliques
        .into_iter()
        .map(|cl| {
            let mut f: Vec<Key> = cl.into_iter().map(|i| keys[i].clone()).collect();
            f.sort_unstable_by_key(|k| k.0);
            f
        })
        .collect();
    assemble(c, facets)
}

fn bron_kerbosch(
    adj: &[HashSet<usize>],
    r: Vec<usize>,
    mut p: HashSet<usize>,
    mut x: HashSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        if !r.is_empty() {
            out.push(r);
        }
        return;
    }
    let pivot = p.iter().chain(x.iter()).max_by_key(|&&u| adj[u].len()).copied();
    let candidates: Vec<usize> = match pivot {
        Some(u) => p.iter().filter(|v| !adj[u].contains(v)).copied().collect(),
        None => p.iter().copied().collect(),
    };
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().filter(|w| adj[v].contains(w)).copied().collect();
        let x2 = x.iter().filter(|w| adj[v].contains(w)).copied().collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.remove(&v);
        x.insert(v);
    }
}

/// `Ch^r A` with every intermediate level kept for carrier tracing.
#[derive(Clone, Debug)]
pub struct IteratedSubdivision {
    base: ChromaticComplex,
    levels: Vec<Subdivision>,
}

impl IteratedSubdivision {
    pub fn new(base: ChromaticComplex) -> Self {
        IteratedSubdivision {
            base,
            levels: Vec::new(),
        }
    }

    pub fn build(base: &ChromaticComplex, r: usize, limits: &Limits) -> Result<Self> {
        let mut it = Self::new(base.clone());
        for _ in 0..r {
            it.push_level(limits)?;
        }
        Ok(it)
    }

    pub fn push_level(&mut self, limits: &Limits) -> Result<()> {
        let next = chromatic_subdivide(self.complex(), limits)?;
        self.levels.push(next);
        Ok(())
    }

    pub fn rounds(&self) -> usize {
        self.levels.len()
    }

    pub fn base(&self) -> &ChromaticComplex {
        &self.base
    }

    /// `Ch^r A` for the current `r`.
    pub fn complex(&self) -> &ChromaticComplex {
        self.levels.last().map(|s| s.complex()).unwrap_or(&self.base)
    }

    /// `Ch^i A`, `i ≤ r`.
    pub fn level(&self, i: usize) -> &ChromaticComplex {
        if i == 0 {
            &self.base
        } else {
            self.levels[i - 1].complex()
        }
    }

    /// The subdivision step producing level `i ≥ 1`.
    pub fn step(&self, i: usize) -> &Subdivision {
        &self.levels[i - 1]
    }

    /// The copy of vertex `v` of level `from` in the top level: `(c, {v})`,
    /// then `(c, {(c, {v})})`, and so on.
    pub fn descend(&self, from: usize, v: VertexId) -> Result<VertexId> {
        let mut cur = v;
        for i in from + 1..=self.rounds() {
            let prev = self.level(i - 1);
            let s = prev.vertex_simplex(cur)?;
            let c = s.pairs()[0].0;
            cur = self.step(i).vertex_for(c, &s).ok_or(Error::ForeignVertex(cur))?;
        }
        Ok(cur)
    }

    /// Carriers of a top-level vertex at levels `r-1, r-2, …, 0`.
    pub fn carrier_chain(&self, v: VertexId) -> Result<Vec<Simplex>> {
        let top = self.levels.last().ok_or(Error::ForeignVertex(v))?;
        let mut chain = vec![top.carrier_of(v)?.clone()];
        for sub in self.levels.iter().rev().skip(1) {
            let prev = chain.last().expect("non-empty");
            chain.push(sub.carrier_of_simplex(prev)?);
        }
        Ok(chain)
    }
}

/// `Ch^r c`; `r = 0` returns `c`.
pub fn iterate_subdivide(c: &ChromaticComplex, r: usize, limits: &Limits) -> Result<ChromaticComplex> {
    let mut cur = c.clone();
    for _ in 0..r {
        cur = chromatic_subdivide(&cur, limits)?.into_complex();
    }
    Ok(cur)
}
