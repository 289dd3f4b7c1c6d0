//! Chromatic simplicial complexes and the standard constructions on them.
//!
//! A [`ChromaticComplex`] is stored as its list of facets; faces are generated
//! on first use and cached. Complexes are immutable once built, so the caches
//! are filled through [`OnceLock`] and the type is safe to share across threads.
//!
//! Vertex ids are kept when taking subcomplexes (stars, links, skeleta), so a
//! vertex of `star(c, s)` is the same [`VertexId`] as in `c`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Process identifier. Colors are dense integers `0..processes`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: VertexId,
    pub color: Color,
    pub label: String,
}

impl Vertex {
    pub fn new(id: u32, color: u32, label: impl Into<String>) -> Self {
        Vertex {
            id: VertexId(id),
            color: Color(color),
            label: label.into(),
        }
    }
}

/// A chromatic simplex: a set of vertices with pairwise distinct colors,
/// stored in canonical `(color, id)` order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    verts: Vec<(Color, VertexId)>,
}

impl Simplex {
    pub fn empty() -> Self {
        Simplex { verts: Vec::new() }
    }

    pub fn new(pairs: impl IntoIterator<Item = (Color, VertexId)>) -> Result<Self> {
        let mut verts: Vec<_> = pairs.into_iter().collect();
        verts.sort_unstable();
        for w in verts.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(Error::DuplicateVertex(w[0].1));
            }
            if w[0].0 == w[1].0 {
                return Err(Error::NonChromatic(w[0].0));
            }
        }
        Ok(Simplex { verts })
    }

    pub fn vertex(color: Color, id: VertexId) -> Self {
        Simplex {
            verts: vec![(color, id)],
        }
    }

    /// Caller guarantees canonical order and distinct colors.
    pub(crate) fn from_sorted(verts: Vec<(Color, VertexId)>) -> Self {
        debug_assert!(verts.windows(2).all(|w| w[0].0 < w[1].0));
        Simplex { verts }
    }

    pub fn dim(&self) -> isize {
        self.verts.len() as isize - 1
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn pairs(&self) -> &[(Color, VertexId)] {
        &self.verts
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts.iter().map(|&(_, v)| v)
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        self.verts.iter().map(|&(c, _)| c)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.verts.iter().any(|&(_, w)| w == v)
    }

    pub fn has_color(&self, c: Color) -> bool {
        self.vertex_of_color(c).is_some()
    }

    pub fn vertex_of_color(&self, c: Color) -> Option<VertexId> {
        self.verts
            .binary_search_by_key(&c, |&(col, _)| col)
            .ok()
            .map(|i| self.verts[i].1)
    }

    /// `self ⊆ other`.
    pub fn is_face_of(&self, other: &Simplex) -> bool {
        if self.len() > other.len() {
            return false;
        }
        let mut it = other.verts.iter();
        'outer: for x in &self.verts {
            for y in it.by_ref() {
                if y == x {
                    continue 'outer;
                }
                if y.0 > x.0 {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &Simplex) -> Result<Simplex> {
        let mut all = self.verts.clone();
        for &p in &other.verts {
            if !all.contains(&p) {
                all.push(p);
            }
        }
        Simplex::new(all)
    }

    pub fn without(&self, drop: &HashSet<VertexId>) -> Simplex {
        Simplex {
            verts: self
                .verts
                .iter()
                .copied()
                .filter(|(_, v)| !drop.contains(v))
                .collect(),
        }
    }

    pub fn shares_vertex_with(&self, set: &HashSet<VertexId>) -> bool {
        self.verts.iter().any(|(_, v)| set.contains(v))
    }

    /// Every subset of the simplex, the empty one and `self` included.
    pub fn subsets(&self) -> impl Iterator<Item = Simplex> + '_ {
        let n = self.verts.len();
        assert!(n < 32, "simplex too large to enumerate faces");
        (0u32..(1u32 << n)).map(move |mask| Simplex {
            verts: (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.verts[i])
                .collect(),
        })
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (_, v)) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// f-vector `(f_-1, f_0, ..., f_d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct FVector {
    counts: Vec<BigUint>,
}

impl FVector {
    /// `counts[0]` is `f_-1`.
    pub fn new(counts: Vec<BigUint>) -> Self {
        let mut fv = FVector { counts };
        fv.trim();
        fv
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        Self::new(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.counts.len() > 1 && self.counts.last().is_some_and(|c| c == &BigUint::ZERO) {
            self.counts.pop();
        }
    }

    /// `f_k`; zero outside the stored range.
    pub fn get(&self, k: isize) -> BigUint {
        if k < -1 {
            return BigUint::ZERO;
        }
        self.counts
            .get((k + 1) as usize)
            .cloned()
            .unwrap_or(BigUint::ZERO)
    }

    /// Highest `k` with a stored coordinate.
    pub fn top(&self) -> isize {
        self.counts.len() as isize - 2
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// Counts without the leading `f_-1`.
    pub fn from_dim0(&self) -> &[BigUint] {
        self.counts.get(1..).unwrap_or(&[])
    }
}

impl fmt::Display for FVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A set of simplices that need not be closed under taking faces, such as an
/// open star or an interior.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FaceSet {
    faces: Vec<Simplex>,
}

impl FaceSet {
    pub fn new(mut faces: Vec<Simplex>) -> Self {
        faces.sort();
        faces.dedup();
        FaceSet { faces }
    }

    pub fn faces(&self) -> &[Simplex] {
        &self.faces
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.faces.binary_search(s).is_ok()
    }

    pub fn count_dim(&self, k: isize) -> usize {
        self.faces.iter().filter(|s| s.dim() == k).count()
    }

    pub fn f_vector(&self) -> FVector {
        let top = self.faces.iter().map(|s| s.dim()).max().unwrap_or(-1);
        let mut counts = vec![0u64; (top + 2).max(1) as usize];
        for s in &self.faces {
            counts[(s.dim() + 1) as usize] += 1;
        }
        FVector::from_u64(&counts)
    }

    /// Keeps the faces whose vertices outside `anchor` are all colored `p`
    /// (and which have at least one such vertex).
    ///
    /// With an empty anchor on a vertex set this selects the `p`-colored
    /// vertices; on the open star of `v` with anchor `{v}` it selects the edges
    /// from `v` to its `p`-colored neighbors.
    pub fn restrict(&self, p: Color, anchor: &Simplex) -> FaceSet {
        FaceSet {
            faces: self
                .faces
                .iter()
                .filter(|s| {
                    let mut rest = s.pairs().iter().filter(|&&(_, v)| !anchor.contains(v));
                    let mut any = false;
                    let all = rest.all(|&(c, _)| {
                        any = true;
                        c == p
                    });
                    any && all
                })
                .cloned()
                .collect(),
        }
    }
}

#[derive(Debug)]
struct FaceCache {
    by_dim: Vec<Vec<Simplex>>,
    all: HashSet<Simplex>,
}

/// A chromatic simplicial complex given by its vertices and facets.
#[derive(Debug, Clone)]
pub struct ChromaticComplex {
    processes: u32,
    vertices: Vec<Vertex>,
    facets: Vec<Simplex>,
    faces: OnceLock<std::sync::Arc<FaceCache>>,
    adjacency: OnceLock<std::sync::Arc<Vec<Vec<VertexId>>>>,
}

impl PartialEq for ChromaticComplex {
    fn eq(&self, other: &Self) -> bool {
        self.processes == other.processes && self.vertices == other.vertices && self.facets == other.facets
    }
}

impl Eq for ChromaticComplex {}

impl ChromaticComplex {
    /// The complex `{∅}`.
    pub fn empty(processes: u32) -> Self {
        Self::from_checked(processes, Vec::new(), Vec::new())
    }

    /// Builds a complex from its vertices and any generating set of simplices.
    /// Facets are the maximal generators; every vertex must lie in one.
    pub fn new(processes: u32, mut vertices: Vec<Vertex>, simplices: Vec<Simplex>) -> Result<Self> {
        vertices.sort_by_key(|v| v.id);
        for w in vertices.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateVertexId(w[0].id));
            }
        }
        for v in &vertices {
            if v.color.0 >= processes {
                return Err(Error::ColorOutOfRange(v.id, v.color, processes));
            }
        }
        let lookup = |id: VertexId| vertices.binary_search_by_key(&id, |v| v.id).ok();
        for s in &simplices {
            for &(c, v) in s.pairs() {
                match lookup(v) {
                    Some(i) if vertices[i].color == c => {}
                    Some(i) => {
                        return Err(Error::Inconsistent(format!(
                            "vertex {v} has color {} but a simplex lists it with color {c}",
                            vertices[i].color
                        )))
                    }
                    None => return Err(Error::UnknownVertex(v)),
                }
            }
        }
        let facets = maximal(simplices);
        let mut seen = vec![false; vertices.len()];
        for f in &facets {
            for v in f.vertices() {
                seen[lookup(v).expect("checked above")] = true;
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::IsolatedVertex(vertices[i].id));
        }
        Ok(Self::from_checked(processes, vertices, facets))
    }

    /// Convenience constructor: vertex `i` gets color `colors[i]` and label `i`;
    /// facets are lists of vertex indices.
    pub fn from_parts(processes: u32, colors: &[u32], facets: &[&[u32]]) -> Result<Self> {
        let vertices: Vec<_> = colors
            .iter()
            .enumerate()
            .map(|(i, &c)| Vertex::new(i as u32, c, i.to_string()))
            .collect();
        let simplices = facets
            .iter()
            .map(|f| {
                Simplex::new(f.iter().map(|&v| {
                    let c = colors.get(v as usize).copied().unwrap_or(u32::MAX);
                    (Color(c), VertexId(v))
                }))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(processes, vertices, simplices)
    }

    /// The standard simplex on `processes` vertices, vertex `i` colored `i`.
    pub fn simplex(processes: u32) -> Self {
        let colors: Vec<u32> = (0..processes).collect();
        let all: Vec<u32> = colors.clone();
        if processes == 0 {
            return Self::empty(0);
        }
        Self::from_parts(processes, &colors, &[&all]).expect("standard simplex is well formed")
    }

    pub(crate) fn from_checked(processes: u32, vertices: Vec<Vertex>, facets: Vec<Simplex>) -> Self {
        ChromaticComplex {
            processes,
            vertices,
            facets,
            faces: OnceLock::new(),
            adjacency: OnceLock::new(),
        }
    }

    /// Subcomplex generated by `generators`, keeping this complex's vertex ids.
    pub fn subcomplex(&self, generators: Vec<Simplex>) -> ChromaticComplex {
        let facets = maximal(generators);
        let used: BTreeSet<VertexId> = facets.iter().flat_map(|f| f.vertices()).collect();
        let vertices = self
            .vertices
            .iter()
            .filter(|v| used.contains(&v.id))
            .cloned()
            .collect();
        Self::from_checked(self.processes, vertices, facets)
    }

    pub fn processes(&self) -> u32 {
        self.processes
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().map(|v| v.id)
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn dim(&self) -> isize {
        self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1)
    }

    fn position(&self, id: VertexId) -> Option<usize> {
        if let Some(v) = self.vertices.get(id.index()) {
            if v.id == id {
                return Some(id.index());
            }
        }
        self.vertices.binary_search_by_key(&id, |v| v.id).ok()
    }

    pub fn vertex(&self, id: VertexId) -> Option<&Vertex> {
        self.position(id).map(|i| &self.vertices[i])
    }

    pub fn has_vertex(&self, id: VertexId) -> bool {
        self.position(id).is_some()
    }

    pub fn color_of(&self, id: VertexId) -> Option<Color> {
        self.vertex(id).map(|v| v.color)
    }

    pub fn label_of(&self, id: VertexId) -> Option<&str> {
        self.vertex(id).map(|v| v.label.as_str())
    }

    /// The 0-simplex `{v}`.
    pub fn vertex_simplex(&self, id: VertexId) -> Result<Simplex> {
        let c = self.color_of(id).ok_or(Error::UnknownVertex(id))?;
        Ok(Simplex::vertex(c, id))
    }

    /// Builds a simplex of this complex from vertex ids.
    pub fn simplex_of(&self, ids: &[VertexId]) -> Result<Simplex> {
        let s = Simplex::new(
            ids.iter()
                .map(|&v| self.color_of(v).map(|c| (c, v)).ok_or(Error::UnknownVertex(v)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        if !self.contains_simplex(&s) {
            return Err(Error::NotAFace(s.to_string()));
        }
        Ok(s)
    }

    fn face_cache(&self) -> &FaceCache {
        self.faces.get_or_init(|| {
            let mut all: HashSet<Simplex> = HashSet::new();
            all.insert(Simplex::empty());
            for f in &self.facets {
                for s in f.subsets() {
                    all.insert(s);
                }
            }
            let top = self.dim();
            let mut by_dim = vec![Vec::new(); (top + 2).max(1) as usize];
            for s in &all {
                by_dim[(s.dim() + 1) as usize].push(s.clone());
            }
            for v in &mut by_dim {
                v.sort();
            }
            std::sync::Arc::new(FaceCache { by_dim, all })
        })
    }

    /// All `k`-dimensional faces; empty when `k` is out of range.
    pub fn faces(&self, k: isize) -> &[Simplex] {
        let cache = self.face_cache();
        if k < -1 {
            return &[];
        }
        cache
            .by_dim
            .get((k + 1) as usize)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    /// All faces, the empty simplex included.
    pub fn all_faces(&self) -> impl Iterator<Item = &Simplex> + '_ {
        self.face_cache().by_dim.iter().flatten()
    }

    pub fn face_set(&self, k: isize) -> FaceSet {
        FaceSet::new(self.faces(k).to_vec())
    }

    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        self.face_cache().all.contains(s)
    }

    pub fn f_vector(&self) -> FVector {
        FVector::from_u64(
            &self
                .face_cache()
                .by_dim
                .iter()
                .map(|v| v.len() as u64)
                .collect::<Vec<_>>(),
        )
    }

    fn adjacency(&self) -> &[Vec<VertexId>] {
        self.adjacency.get_or_init(|| {
            let mut adj: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); self.vertices.len()];
            for f in &self.facets {
                for (_, a) in f.pairs() {
                    let ia = self.position(*a).expect("facet vertex");
                    for (_, b) in f.pairs() {
                        if a != b {
                            adj[ia].insert(*b);
                        }
                    }
                }
            }
            std::sync::Arc::new(adj.into_iter().map(|s| s.into_iter().collect()).collect())
        })
    }

    /// Vertices adjacent to `v`, in id order.
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        match self.position(v) {
            Some(i) => &self.adjacency()[i],
            None => &[],
        }
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn vertices_of_color(&self, p: Color) -> Vec<VertexId> {
        self.vertices
            .iter()
            .filter(|v| v.color == p)
            .map(|v| v.id)
            .collect()
    }

    fn check_member(&self, s: &Simplex) -> Result<()> {
        if self.contains_simplex(s) {
            Ok(())
        } else {
            Err(Error::NotAFace(s.to_string()))
        }
    }

    /// Closed star: the subcomplex generated by every simplex containing some
    /// simplex of `s`.
    pub fn star(&self, s: &[Simplex]) -> Result<ChromaticComplex> {
        for x in s {
            self.check_member(x)?;
        }
        let gens = self
            .facets
            .iter()
            .filter(|f| s.iter().any(|x| x.is_face_of(f)))
            .cloned()
            .collect();
        Ok(self.subcomplex(gens))
    }

    /// Faces of the complex that contain `s`, `s` included.
    pub fn open_star(&self, s: &Simplex) -> Result<FaceSet> {
        self.check_member(s)?;
        Ok(FaceSet::new(
            self.all_faces().filter(|f| s.is_face_of(f)).cloned().collect(),
        ))
    }

    /// Simplices of the star of `s` that share no vertex with any simplex of `s`.
    pub fn link(&self, s: &[Simplex]) -> Result<ChromaticComplex> {
        let star = self.star(s)?;
        let drop: HashSet<VertexId> = s.iter().flat_map(|x| x.vertices()).collect();
        let gens = star
            .facets
            .iter()
            .map(|f| f.without(&drop))
            .filter(|f| !f.is_empty())
            .collect();
        Ok(self.subcomplex(gens))
    }

    /// Link of a single vertex.
    pub fn vertex_link(&self, v: VertexId) -> Result<ChromaticComplex> {
        self.link(&[self.vertex_simplex(v)?])
    }

    /// Proper faces lying in exactly one facet, closed under taking faces.
    pub fn boundary(&self) -> ChromaticComplex {
        let mut count: HashMap<Simplex, usize> = HashMap::new();
        for f in &self.facets {
            for s in f.subsets() {
                if s.len() < f.len() {
                    *count.entry(s).or_default() += 1;
                }
            }
        }
        let gens = count
            .into_iter()
            .filter(|(s, n)| *n == 1 && !s.is_empty())
            .map(|(s, _)| s)
            .collect();
        self.subcomplex(gens)
    }

    /// Faces not on the boundary.
    pub fn interior(&self) -> FaceSet {
        let boundary = self.boundary();
        FaceSet::new(
            self.all_faces()
                .filter(|s| !boundary.contains_simplex(s))
                .cloned()
                .collect(),
        )
    }

    /// All simplices of dimension at most `l`.
    pub fn skeleton(&self, l: usize) -> ChromaticComplex {
        let l = l as isize;
        let mut gens = Vec::new();
        for f in &self.facets {
            if f.dim() <= l {
                gens.push(f.clone());
            } else {
                gens.extend(f.subsets().filter(|s| s.dim() == l));
            }
        }
        self.subcomplex(gens)
    }

    /// Simplicial join. The vertices of `b` are renumbered after those of `a`.
    pub fn join(a: &ChromaticComplex, b: &ChromaticComplex) -> Result<ChromaticComplex> {
        let offset = a.vertices.iter().map(|v| v.id.0 + 1).max().unwrap_or(0);
        let mut vertices = a.vertices.clone();
        vertices.extend(b.vertices.iter().map(|v| Vertex {
            id: VertexId(v.id.0 + offset),
            color: v.color,
            label: v.label.clone(),
        }));
        let shift = |s: &Simplex| {
            Simplex::from_sorted(
                s.pairs()
                    .iter()
                    .map(|&(c, v)| (c, VertexId(v.0 + offset)))
                    .collect(),
            )
        };
        let fa: Vec<Simplex> = if a.facets.is_empty() {
            vec![Simplex::empty()]
        } else {
            a.facets.clone()
        };
        let fb: Vec<Simplex> = if b.facets.is_empty() {
            vec![Simplex::empty()]
        } else {
            b.facets.iter().map(shift).collect()
        };
        let mut gens = Vec::with_capacity(fa.len() * fb.len());
        for x in &fa {
            for y in &fb {
                let u = x.union(y).map_err(|e| match e {
                    Error::NonChromatic(c) => Error::JoinColorClash(c),
                    other => other,
                })?;
                if !u.is_empty() {
                    gens.push(u);
                }
            }
        }
        let processes = a.processes.max(b.processes);
        Ok(Self::from_checked(processes, vertices, maximal(gens)))
    }

    /// Vertices of color `p`, as a face set of 0-simplices.
    pub fn restrict_vertices(&self, p: Color) -> FaceSet {
        self.face_set(0).restrict(p, &Simplex::empty())
    }
}

/// Keeps the inclusion-maximal simplices, sorted.
pub(crate) fn maximal(mut gens: Vec<Simplex>) -> Vec<Simplex> {
    gens.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Simplex> = Vec::new();
    let mut by_vertex: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for s in gens {
        let dominated = match s.vertices().next() {
            None => !kept.is_empty(),
            Some(v) => by_vertex.get(&v).is_some_and(|ids| {
                ids.iter()
                    .any(|&i| kept[i].len() > s.len() && s.is_face_of(&kept[i]))
            }),
        };
        if dominated {
            continue;
        }
        if s.is_empty() {
            // {∅} is represented by an empty facet list
            continue;
        }
        let idx = kept.len();
        for v in s.vertices() {
            by_vertex.entry(v).or_default().push(idx);
        }
        kept.push(s);
    }
    kept.sort();
    kept
}
