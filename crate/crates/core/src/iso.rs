//! Color-preserving isomorphism of chromatic complexes.
//!
//! Vertices are first split into classes by color-refinement (color, degree,
//! facet count, then repeatedly the multiset of neighbor classes), with one
//! class table shared by both complexes. A backtracking search then maps
//! vertices in breadth-first order, checking adjacency against every mapped
//! neighbor and checking each facet as soon as all its vertices are mapped.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::complex::{ChromaticComplex, Simplex, VertexId};

type Classes = (Vec<u32>, Vec<u32>);

fn refine(a: &ChromaticComplex, b: &ChromaticComplex) -> Option<Classes> {
    let initial = |c: &ChromaticComplex| -> Vec<(u32, usize, usize)> {
        let mut facet_count = vec![0usize; c.vertices().len()];
        let pos: BTreeMap<VertexId, usize> = c.vertex_ids().enumerate().map(|(i, v)| (v, i)).collect();
        for f in c.facets() {
            for v in f.vertices() {
                facet_count[pos[&v]] += 1;
            }
        }
        c.vertices()
            .iter()
            .enumerate()
            .map(|(i, v)| (v.color.0, c.degree(v.id), facet_count[i]))
            .collect()
    };
    let intern = |xs: &[Vec<u64>], ys: &[Vec<u64>]| -> Classes {
        let mut table: BTreeMap<&Vec<u64>, u32> = BTreeMap::new();
        for s in xs.iter().chain(ys) {
            let next = table.len() as u32;
            table.entry(s).or_insert(next);
        }
        (
            xs.iter().map(|s| table[s]).collect(),
            ys.iter().map(|s| table[s]).collect(),
        )
    };
    let to_sig = |t: &[(u32, usize, usize)]| -> Vec<Vec<u64>> {
        t.iter()
            .map(|&(c, d, f)| vec![c as u64, d as u64, f as u64])
            .collect()
    };
    let (mut ca, mut cb) = intern(&to_sig(&initial(a)), &to_sig(&initial(b)));
    let count = |x: &[u32]| x.iter().collect::<HashSet<_>>().len();
    loop {
        if histogram(&ca) != histogram(&cb) {
            return None;
        }
        let step = |c: &ChromaticComplex, cls: &[u32]| -> Vec<Vec<u64>> {
            let pos: BTreeMap<VertexId, usize> = c.vertex_ids().enumerate().map(|(i, v)| (v, i)).collect();
            c.vertex_ids()
                .enumerate()
                .map(|(i, v)| {
                    let mut nb: Vec<u64> = c.neighbors(v).iter().map(|w| cls[pos[w]] as u64).collect();
                    nb.sort_unstable();
                    let mut sig = vec![cls[i] as u64];
                    sig.extend(nb);
                    sig
                })
                .collect()
        };
        let (na, nb) = intern(&step(a, &ca), &step(b, &cb));
        let before = count(&ca) + count(&cb);
        let after = count(&na) + count(&nb);
        ca = na;
        cb = nb;
        if after == before {
            if histogram(&ca) != histogram(&cb) {
                return None;
            }
            return Some((ca, cb));
        }
    }
}

fn histogram(x: &[u32]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for &c in x {
        *h.entry(c).or_insert(0) += 1;
    }
    h
}

struct Search<'a> {
    b: &'a ChromaticComplex,
    a_ids: Vec<VertexId>,
    b_ids: Vec<VertexId>,
    a_adj: Vec<Vec<usize>>,
    b_adj: Vec<Vec<usize>>,
    class_a: Vec<u32>,
    by_class_b: BTreeMap<u32, Vec<usize>>,
    order: Vec<usize>,
    /// facets of `a` (as index lists) completed when `order[step]` is mapped
    completes: Vec<Vec<Vec<usize>>>,
    b_facets: HashSet<Simplex>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn run(&mut self, step: usize) -> bool {
        if step == self.order.len() {
            return true;
        }
        let x = self.order[step];
        let candidates = self.by_class_b[&self.class_a[x]].clone();
        for y in candidates {
            if self.used[y] || !self.consistent(x, y) {
                continue;
            }
            self.map[x] = Some(y);
            self.used[y] = true;
            if self.facets_ok(step) && self.run(step + 1) {
                return true;
            }
            self.map[x] = None;
            self.used[y] = false;
        }
        false
    }

    fn consistent(&self, x: usize, y: usize) -> bool {
        let mut mapped = 0;
        for &u in &self.a_adj[x] {
            if let Some(mu) = self.map[u] {
                if self.b_adj[y].binary_search(&mu).is_err() {
                    return false;
                }
                mapped += 1;
            }
        }
        let mapped_b = self.b_adj[y].iter().filter(|&&w| self.used[w]).count();
        mapped == mapped_b
    }

    fn facets_ok(&self, step: usize) -> bool {
        self.completes[step].iter().all(|f| {
            let image = Simplex::new(f.iter().map(|&i| {
                let y = self.map[i].expect("mapped");
                (self.b.color_of(self.b_ids[y]).expect("vertex"), self.b_ids[y])
            }));
            image.is_ok_and(|s| self.b_facets.contains(&s))
        })
    }
}

/// A color-preserving vertex bijection `a → b` that maps facets onto facets,
/// as `(vertex of a, vertex of b)` pairs sorted by the first id.
pub fn chromatic_iso(a: &ChromaticComplex, b: &ChromaticComplex) -> Option<Vec<(VertexId, VertexId)>> {
    if a.vertices().len() != b.vertices().len()
        || a.facets().len() != b.facets().len()
        || a.f_vector() != b.f_vector()
    {
        return None;
    }
    let (class_a, class_b) = refine(a, b)?;
    let a_ids: Vec<VertexId> = a.vertex_ids().collect();
    let b_ids: Vec<VertexId> = b.vertex_ids().collect();
    let pos = |ids: &[VertexId]| -> BTreeMap<VertexId, usize> {
        ids.iter().enumerate().map(|(i, &v)| (v, i)).collect()
    };
    let (pa, pb) = (pos(&a_ids), pos(&b_ids));
    let adj = |c: &ChromaticComplex, p: &BTreeMap<VertexId, usize>| -> Vec<Vec<usize>> {
        c.vertex_ids()
            .map(|v| {
                let mut n: Vec<usize> = c.neighbors(v).iter().map(|w| p[w]).collect();
                n.sort_unstable();
                n
            })
            .collect()
    };
    let a_adj = adj(a, &pa);
    let b_adj = adj(b, &pb);

    let hist = histogram(&class_a);
    let n = a_ids.len();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    while order.len() < n {
        let start = (0..n)
            .filter(|&i| !seen[i])
            .min_by_key(|&i| (hist[&class_a[i]], i))
            .expect("unvisited vertex");
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            let mut next: Vec<usize> = a_adj[x].iter().copied().filter(|&u| !seen[u]).collect();
            next.sort_by_key(|&u| (hist[&class_a[u]], u));
            for u in next {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    let mut step_of = vec![0usize; n];
    for (s, &x) in order.iter().enumerate() {
        step_of[x] = s;
    }
    let mut completes = vec![Vec::new(); n];
    for f in a.facets() {
        let idx: Vec<usize> = f.vertices().map(|v| pa[&v]).collect();
        let last = idx.iter().map(|&i| step_of[i]).max().expect("non-empty facet");
        completes[last].push(idx);
    }
    let mut by_class_b: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, &c) in class_b.iter().enumerate() {
        by_class_b.entry(c).or_default().push(i);
    }
    let mut search = Search {
        b,
        a_ids,
        b_ids,
        a_adj,
        b_adj,
        class_a,
        by_class_b,
        order,
        completes,
        b_facets: b.facets().iter().cloned().collect(),
        map: vec![None; n],
        used: vec![false; n],
    };
    if !search.run(0) {
        return None;
    }
    Some(
        (0..n)
            .map(|i| (search.a_ids[i], search.b_ids[search.map[i].expect("complete")]))
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::full_info_round;
    use crate::subdivision::{chromatic_subdivide, Limits};

    #[test]
    fn identity_on_itself() {
        let c = chromatic_subdivide(&ChromaticComplex::simplex(3), &Limits::default())
            .unwrap()
            .into_complex();
        let m = chromatic_iso(&c, &c).unwrap();
        assert!(m.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn subdivision_matches_full_information_round() {
        let l = Limits::default();
        let d = ChromaticComplex::simplex(3);
        let ch = chromatic_subdivide(&d, &l).unwrap().into_complex();
        let xi = full_info_round(&d, 0, &l, false).unwrap().complex;
        assert!(chromatic_iso(&ch, &xi).is_some());
    }

    #[test]
    fn rejects_different_shapes() {
        let a = ChromaticComplex::simplex(3);
        let b = ChromaticComplex::from_parts(3, &[0, 1, 2], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        assert!(chromatic_iso(&a, &b).is_none());
        // same f-vector, colors swapped on the middle vertex
        let p = ChromaticComplex::from_parts(2, &[0, 1, 0], &[&[0, 1], &[1, 2]]).unwrap();
        let q = ChromaticComplex::from_parts(2, &[1, 0, 1], &[&[0, 1], &[1, 2]]).unwrap();
        assert!(chromatic_iso(&p, &q).is_none());
    }

    #[test]
    fn hollow_versus_filled_needs_facet_check() {
        // triangle boundary and filled triangle share a 1-skeleton
        let hollow = ChromaticComplex::from_parts(3, &[0, 1, 2], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap();
        let filled = ChromaticComplex::simplex(3);
        assert!(chromatic_iso(&hollow, &filled).is_none());
    }

    #[test]
    fn relabeled_copy_is_found() {
        let a = ChromaticComplex::from_parts(2, &[0, 1, 0, 1], &[&[0, 1], &[1, 2], &[2, 3]]).unwrap();
        let b = ChromaticComplex::from_parts(2, &[1, 0, 1, 0], &[&[3, 2], &[2, 1], &[1, 0]]).unwrap();
        let m = chromatic_iso(&a, &b).unwrap();
        assert_eq!(m[0], (VertexId(0), VertexId(3)));
    }
}
