//! f-vector recurrences for chromatic subdivisions and their open stars,
//! the binomial identity behind the asymptotic bounds, and finite-n ratio
//! diagnostics for those bounds.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::complex::{ChromaticComplex, FVector, Simplex, VertexId};
use crate::error::{Error, Result};
use crate::partition::fubini;
use crate::subdivision::IteratedSubdivision;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `(n)_k = n (n-1) … (n-k+1)`; zero when `k > n`.
pub fn falling_factorial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i))
}

pub fn factorial(n: u64) -> BigUint {
    falling_factorial(n, n)
}

fn star_memo() -> &'static Mutex<HashMap<(usize, usize), BigUint>> {
    static MEMO: OnceLock<Mutex<HashMap<(usize, usize), BigUint>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `f_k(St°(Ch Δ^n, v))` at a corner `v`:
/// `T(k,n) = Σ_{i=k..n} C(n,i) Σ_{j=1..k} C(i,j) T(k-j, i-j)`, `T(0,n) = 1`.
pub fn f_star_ch_delta(n: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    if k > n {
        return BigUint::zero();
    }
    if let Some(v) = star_memo().lock().expect("memo poisoned").get(&(k, n)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for i in k..=n {
        let mut inner = BigUint::zero();
        for j in 1..=k {
            inner += binomial(i as u64, j as u64) * f_star_ch_delta(i - j, k - j);
        }
        total += binomial(n as u64, i as u64) * inner;
    }
    star_memo()
        .lock()
        .expect("memo poisoned")
        .insert((k, n), total.clone());
    total
}

/// `f_k(Int St°(Ch Δ^n, v)) = Σ_{i=1..k} C(n,i) f_{k-i}(St°(Ch Δ^{n-i}, v))`,
/// zero for `k = 0`.
pub fn f_int_star_ch(n: usize, k: usize) -> BigUint {
    (1..=k.min(n))
        .map(|i| binomial(n as u64, i as u64) * f_star_ch_delta(n - i, k - i))
        .sum()
}

/// `f_k(St°(Ch^r A, v))` from the f-vector of `St°(A, v)`, one subdivision
/// level at a time.
pub fn f_star_ch_iterated(base_star: &FVector, r: usize, k: usize) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    let n = base_star.top().max(0) as usize;
    let mut cur: Vec<BigUint> = (0..=n).map(|i| base_star.get(i as isize)).collect();
    for _ in 0..r {
        let next: Vec<BigUint> = (0..=n)
            .map(|kk| {
                if kk == 0 {
                    return BigUint::one();
                }
                (kk..=n)
                    .map(|i| {
                        let inner: BigUint = (1..=kk)
                            .map(|j| binomial(i as u64, j as u64) * f_star_ch_delta(i - j, kk - j))
                            .sum();
                        &cur[i] * inner
                    })
                    .sum()
            })
            .collect();
        cur = next;
    }
    cur.get(k).cloned().unwrap_or_default()
}

fn interior_h(s: usize, t: usize, memo: &mut HashMap<(usize, usize), BigUint>) -> BigUint {
    if let Some(v) = memo.get(&(s, t)) {
        return v.clone();
    }
    let mut total = BigUint::zero();
    for b in 1..=s {
        let rest = if b == s {
            BigUint::one()
        } else {
            let mut acc = BigUint::zero();
            for tp in (s - b)..=(t - b) {
                acc += binomial((t - s) as u64, (tp + b - s) as u64) * interior_h(s - b, tp, memo);
            }
            acc
        };
        total += binomial(s as u64, b as u64) * rest;
    }
    memo.insert((s, t), total.clone());
    total
}

/// `f_k(Int Ch Δ^n)`: interior `k`-faces of the subdivided `n`-simplex.
///
/// Counted by the chain of blocks the face's vertices occupy: the `k+1`
/// colors of the face and the `n+1` processes of the carrier.
pub fn interior_ch_delta(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let mut memo = HashMap::new();
    binomial(n as u64 + 1, k as u64 + 1) * interior_h(k + 1, n + 1, &mut memo)
}

/// Table of `f_k(Int τ(Δ^i))` for a subdivision operator `τ`.
#[derive(Clone, Debug, Default)]
pub struct InteriorTable {
    entries: HashMap<(usize, usize), BigUint>,
}

impl InteriorTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, i: usize, k: usize, value: BigUint) {
        self.entries.insert((i, k), value);
    }

    pub fn get(&self, i: usize, k: usize) -> Option<&BigUint> {
        self.entries.get(&(i, k))
    }

    /// `τ = Ch`, for simplices up to dimension `max_dim`.
    pub fn chromatic(max_dim: usize) -> Self {
        let mut t = Self::new();
        for i in 0..=max_dim {
            for k in 0..=i {
                t.insert(i, k, interior_ch_delta(i, k));
            }
        }
        t
    }

    /// `τ = id`: the only interior face of `Δ^i` is `Δ^i` itself.
    pub fn identity(max_dim: usize) -> Self {
        let mut t = Self::new();
        for i in 0..=max_dim {
            for k in 0..=i {
                t.insert(i, k, if i == k { BigUint::one() } else { BigUint::zero() });
            }
        }
        t
    }
}

/// `f_k(τ(A)) = Σ_{i=k..n} f_i(A) f_k(Int τ(Δ^i))`.
pub fn fvec_subdivision(fvec_a: &FVector, table: &InteriorTable) -> Result<FVector> {
    let n = fvec_a.top();
    if n < 0 {
        return Ok(fvec_a.clone());
    }
    let n = n as usize;
    let mut counts = vec![fvec_a.get(-1)];
    for k in 0..=n {
        let mut total = BigUint::zero();
        for i in k..=n {
            let fi = fvec_a.get(i as isize);
            if fi.is_zero() {
                continue;
            }
            let t = table.get(i, k).ok_or(Error::MissingTableEntry { i, k })?;
            total += fi * t;
        }
        counts.push(total);
    }
    Ok(FVector::new(counts))
}

/// `r` applications of [`fvec_subdivision`] with the `Ch` interior table.
pub fn fvec_ch_iterated(fvec_a: &FVector, r: usize) -> Result<FVector> {
    let table = InteriorTable::chromatic(fvec_a.top().max(0) as usize);
    let mut cur = fvec_a.clone();
    for _ in 0..r {
        cur = fvec_subdivision(&cur, &table)?;
    }
    Ok(cur)
}

/// f-vector of `St°(c, v)`.
pub fn open_star_fvector(c: &ChromaticComplex, v: VertexId) -> Result<FVector> {
    Ok(c.open_star(&c.vertex_simplex(v)?)?.f_vector())
}

/// Same-colored vertices at distance two from `v`, i.e. `f_0(Lk(c, St(c, v))|_p)`
/// with `p` the color of `v`, computed from the link of the star.
pub fn link_of_star_count(c: &ChromaticComplex, v: VertexId) -> Result<usize> {
    let p = c.color_of(v).ok_or(Error::UnknownVertex(v))?;
    let star = c.star(&[c.vertex_simplex(v)?])?;
    let lk = c.link(star.faces(0))?;
    Ok(lk.vertices_of_color(p).len())
}

/// `f_0(Lk(Ch c, St(Ch c, v))|_p) = Σ_{i≥1} f_i(St°(c, v))`.
pub fn link_star_count(c: &ChromaticComplex, v: VertexId) -> Result<BigUint> {
    let fv = open_star_fvector(c, v)?;
    Ok((1..=fv.top().max(0)).map(|i| fv.get(i)).sum())
}

/// The vertex of `Ch c` whose copy in `Ch^r c` has the largest `k`-face count
/// in its open star. Returns the vertex of `Ch c`, its copy in `Ch^r c`, and
/// the count. Ties go to the smallest id.
pub fn argmax_star_vertex(
    it: &IteratedSubdivision,
    k: usize,
) -> Result<Option<(VertexId, VertexId, BigUint)>> {
    if it.rounds() == 0 {
        return Err(Error::InvalidArgument(
            "argmax needs at least one subdivision".into(),
        ));
    }
    let top = it.complex();
    let mut best: Option<(VertexId, VertexId, BigUint)> = None;
    for w in it.level(1).vertex_ids() {
        let image = it.descend(1, w)?;
        let value = open_star_fvector(top, image)?.get(k as isize);
        if best.as_ref().map_or(true, |b| value > b.2) {
            best = Some((w, image, value));
        }
    }
    Ok(best)
}

/// Binomial identity, checked exactly:
/// `Σ_{i=k..n} C(n,i) C(i,r) b^{i-α} (i-r)_{k-r} = b^{k-α}/r! · (b+1)^{n-k} (n)_k`.
pub fn identity_a1_check(n: u64, k: u64, r: u64, b: u64, alpha: i64) -> bool {
    let (lhs, rhs) = identity_a1_sides(n, k, r, b, alpha);
    lhs == rhs
}

pub fn identity_a1_sides(n: u64, k: u64, r: u64, b: u64, alpha: i64) -> (BigRational, BigRational) {
    let big = |x: BigUint| BigRational::from_integer(BigInt::from(x));
    let pow = |e: i64| {
        let base = BigRational::from_integer(BigInt::from(b));
        if e >= 0 {
            num_traits::pow(base, e as usize)
        } else {
            num_traits::pow(base.recip(), (-e) as usize)
        }
    };
    let mut lhs = BigRational::zero();
    for i in k..=n {
        let term = big(binomial(n, i)
            * binomial(i, r)
            * falling_factorial(i.saturating_sub(r), k.saturating_sub(r)));
        lhs += term * pow(i as i64 - alpha);
    }
    let rhs = pow(k as i64 - alpha) / big(factorial(r))
        * big(num_traits::pow(BigUint::from(b + 1), (n - k) as usize))
        * big(falling_factorial(n, k));
    (lhs, rhs)
}

/// One row of the bounding-function diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub k: usize,
    pub n: usize,
    pub t: BigUint,
    /// `(k+1)^{n-k} (n)_k`, exact.
    pub bound: BigUint,
    /// `T · ln(2)^{k-1} / bound`.
    pub ratio: f64,
    /// `T · ln(2)^{k+1} / bound`.
    pub ratio_alt: f64,
}

fn big_ratio(num: &BigUint, den: &BigUint) -> f64 {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
        .to_f64()
        .unwrap_or(f64::NAN)
}

pub fn ratio_row(k: usize, n: usize) -> RatioRow {
    let t = f_star_ch_delta(n, k);
    let bound = num_traits::pow(BigUint::from(k + 1), n - k) * falling_factorial(n as u64, k as u64);
    let base = big_ratio(&t, &bound);
    let ln2 = std::f64::consts::LN_2;
    RatioRow {
        k,
        n,
        t,
        bound,
        ratio: base * ln2.powi(k as i32 - 1),
        ratio_alt: base * ln2.powi(k as i32 + 1),
    }
}

/// Rows for `n` in `n_min..=n_max` (rows with `n < k` are skipped).
pub fn bounding_ratio_table(k: usize, n_min: usize, n_max: usize) -> Vec<RatioRow> {
    (n_min.max(k)..=n_max).map(|n| ratio_row(k, n)).collect()
}

/// `Fubini(n) / (n! / (2 ln(2)^{n+1}))`.
pub fn fubini_asymptotic_ratio(n: usize) -> f64 {
    let ratio = big_ratio(&fubini(n), &factorial(n as u64));
    ratio * 2.0 * std::f64::consts::LN_2.powi(n as i32 + 1)
}

/// f-vector of `Ch^r` of the standard simplex on `processes` vertices,
/// computed from the recurrence.
pub fn fvec_ch_delta(processes: u32, r: usize) -> Result<FVector> {
    fvec_ch_iterated(&ChromaticComplex::simplex(processes).f_vector(), r)
}

/// Direct enumeration helper: the k-faces of an open star that are interior
/// faces of the complex.
pub fn interior_open_star_count(c: &ChromaticComplex, v: VertexId, k: isize) -> Result<usize> {
    let s: Simplex = c.vertex_simplex(v)?;
    let interior = c.interior();
    Ok(c.open_star(&s)?
        .faces()
        .iter()
        .filter(|f| f.dim() == k && interior.contains(f))
        .count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subdivision::{chromatic_subdivide, Limits};

    fn u(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 2), u(20));
        assert_eq!(falling_factorial(7, 0), u(1));
        assert_eq!(falling_factorial(4, 4), u(24));
        assert_eq!(falling_factorial(2, 3), u(0));
    }

    #[test]
    fn star_table_diagonal_is_fubini() {
        let expected = [1u64, 1, 3, 13, 75, 541];
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(f_star_ch_delta(n, n), u(e));
        }
        for n in 0..=8 {
            assert_eq!(f_star_ch_delta(n, n), fubini(n));
            assert_eq!(f_star_ch_delta(n, 0), u(1));
        }
        assert_eq!(f_star_ch_delta(2, 1), u(4));
        assert_eq!(f_star_ch_delta(1, 3), u(0));
    }

    #[test]
    fn star_table_matches_enumeration_at_corner() {
        for n in 0..=3u32 {
            let d = ChromaticComplex::simplex(n + 1);
            let ch = chromatic_subdivide(&d, &Limits::default()).unwrap();
            let corner = ch
                .vertex_for(crate::complex::Color(0), &d.vertex_simplex(VertexId(0)).unwrap())
                .unwrap();
            let fv = open_star_fvector(ch.complex(), corner).unwrap();
            for k in 0..=n as usize {
                assert_eq!(fv.get(k as isize), f_star_ch_delta(n as usize, k), "n={n} k={k}");
                if n == 0 {
                    continue;
                }
                let direct = interior_open_star_count(ch.complex(), corner, k as isize).unwrap();
                assert_eq!(u(direct as u64), f_int_star_ch(n as usize, k), "int n={n} k={k}");
            }
        }
        assert_eq!(f_int_star_ch(1, 1), u(1));
        assert_eq!(f_int_star_ch(5, 0), u(0));
    }

    #[test]
    fn interior_counts_match_enumeration() {
        for n in 0..=3u32 {
            let d = ChromaticComplex::simplex(n + 1);
            let ch = chromatic_subdivide(&d, &Limits::default()).unwrap();
            let int = ch.complex().interior();
            for k in 0..=n as usize {
                assert_eq!(
                    u(int.count_dim(k as isize) as u64),
                    interior_ch_delta(n as usize, k),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn subdivision_fvector_by_formula() {
        let d2 = ChromaticComplex::simplex(3).f_vector();
        let t = InteriorTable::chromatic(2);
        let ch = fvec_subdivision(&d2, &t).unwrap();
        assert_eq!(ch, FVector::from_u64(&[1, 12, 24, 13]));
        assert_eq!(fvec_subdivision(&d2, &InteriorTable::identity(2)).unwrap(), d2);
        let missing = fvec_subdivision(&d2, &InteriorTable::chromatic(1));
        assert!(matches!(missing, Err(Error::MissingTableEntry { i: 2, k: 0 })));
    }

    #[test]
    fn iterated_star_examples() {
        let d2 = ChromaticComplex::simplex(3);
        let base = open_star_fvector(&d2, VertexId(0)).unwrap();
        assert_eq!(f_star_ch_iterated(&base, 1, 2), u(3));
        assert_eq!(f_star_ch_iterated(&base, 4, 0), u(1));
        let it = IteratedSubdivision::build(&d2, 2, &Limits::default()).unwrap();
        let corner = it.descend(0, VertexId(0)).unwrap();
        let direct = open_star_fvector(it.complex(), corner).unwrap();
        for k in 0..=2 {
            assert_eq!(f_star_ch_iterated(&base, 2, k), direct.get(k as isize));
        }
    }

    #[test]
    fn link_star_examples() {
        let d1 = ChromaticComplex::simplex(2);
        assert_eq!(link_star_count(&d1, VertexId(0)).unwrap(), u(1));
        let d2 = ChromaticComplex::simplex(3);
        assert_eq!(link_star_count(&d2, VertexId(0)).unwrap(), u(3));
        let pt = ChromaticComplex::simplex(1);
        assert_eq!(link_star_count(&pt, VertexId(0)).unwrap(), u(0));
        for d in [&d1, &d2, &pt] {
            let ch = chromatic_subdivide(d, &Limits::default()).unwrap();
            let v = ch
                .vertex_for(crate::complex::Color(0), &d.vertex_simplex(VertexId(0)).unwrap())
                .unwrap();
            let direct = link_of_star_count(ch.complex(), v).unwrap();
            assert_eq!(u(direct as u64), link_star_count(d, VertexId(0)).unwrap());
        }
    }

    #[test]
    fn argmax_examples() {
        let l = Limits::default();
        let d2 = ChromaticComplex::simplex(3);
        let it = IteratedSubdivision::build(&d2, 1, &l).unwrap();
        let (w, _, value) = argmax_star_vertex(&it, 2).unwrap().unwrap();
        let top = &d2.facets()[0];
        assert_eq!(it.step(1).carrier_of(w).unwrap(), top);
        assert_eq!(value, u(6));

        let d1 = ChromaticComplex::simplex(2);
        let it = IteratedSubdivision::build(&d1, 1, &l).unwrap();
        let (w, _, value) = argmax_star_vertex(&it, 1).unwrap().unwrap();
        assert_eq!(it.step(1).carrier_of(w).unwrap().len(), 2);
        assert_eq!(value, u(2));

        let pt = ChromaticComplex::simplex(1);
        let it = IteratedSubdivision::build(&pt, 1, &l).unwrap();
        assert_eq!(argmax_star_vertex(&it, 0).unwrap().unwrap().0, VertexId(0));
    }

    #[test]
    fn identity_a1_examples() {
        assert!(identity_a1_check(4, 2, 1, 2, 0));
        assert!(identity_a1_check(3, 1, 1, 1, 0));
        for n in 0..5 {
            assert!(identity_a1_check(n, n, n, 3, 1));
        }
    }

    #[test]
    fn ratio_examples() {
        let row = ratio_row(1, 1);
        assert_eq!(row.t, u(1));
        assert_eq!(row.bound, u(1));
        assert!((row.ratio - 1.0).abs() < 1e-12);
        assert!((fubini_asymptotic_ratio(10) - 1.0).abs() < 0.01);
        for row in bounding_ratio_table(2, 5, 12) {
            assert!(row.ratio > 0.5 && row.ratio < 1.2, "{row:?}");
        }
    }
}
