//! Seeded generators for test corpora.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{ChromaticComplex, Color, Simplex, Vertex, VertexId};
use crate::distinguishability::Encoding;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A chromatic complex on at most `processes` colors with between one and
/// `max_facets` generators. Each color has a pool of up to three vertices;
/// unused vertices are dropped and ids renumbered densely.
pub fn random_complex<R: Rng>(rng: &mut R, processes: u32, max_facets: usize) -> ChromaticComplex {
    let pool = rng.random_range(1..=3u32);
    let count = rng.random_range(1..=max_facets.max(1));
    let mut gens: Vec<Vec<(u32, u32)>> = Vec::with_capacity(count);
    for _ in 0..count {
        let mut colors: Vec<u32> = (0..processes).collect();
        colors.shuffle(rng);
        let size = rng.random_range(1..=processes as usize);
        gens.push(
            colors[..size]
                .iter()
                .map(|&c| (c, rng.random_range(0..pool)))
                .collect(),
        );
    }
    let used: BTreeSet<(u32, u32)> = gens.iter().flatten().copied().collect();
    let ids: Vec<(u32, u32)> = used.into_iter().collect();
    let id_of = |key: &(u32, u32)| VertexId(ids.binary_search(key).expect("used") as u32);
    let vertices = ids
        .iter()
        .enumerate()
        .map(|(i, &(c, _))| Vertex::new(i as u32, c, i.to_string()))
        .collect();
    let simplices = gens
        .iter()
        .map(|g| Simplex::new(g.iter().map(|k| (Color(k.0), id_of(k)))).expect("distinct colors"))
        .collect();
    ChromaticComplex::new(processes, vertices, simplices).expect("well formed")
}

/// Codes drawn uniformly from `1..=max_code`.
pub fn random_encoding<R: Rng>(rng: &mut R, c: &ChromaticComplex, max_code: u32) -> Encoding {
    Encoding::from_pairs(c.vertex_ids().map(|v| (v, rng.random_range(1..=max_code.max(1)))))
}

/// A simple graph on `1..=max_nodes` nodes, each edge present with
/// probability `density`.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize, density: f64) -> (usize, Vec<(usize, usize)>) {
    let n = rng.random_range(1..=max_nodes.max(1));
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(density) {
                edges.push((a, b));
            }
        }
    }
    (n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = random_complex(&mut rng(7), 3, 6);
        let b = random_complex(&mut rng(7), 3, 6);
        assert_eq!(a, b);
        assert!(a.facets().len() <= 6);
        for f in a.facets() {
            assert!(f.len() <= 3);
        }
    }
}
