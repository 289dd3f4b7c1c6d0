//! Ordered set partitions, which index both immediate-snapshot schedules and
//! the facets of a chromatic subdivision.

use num_bigint::BigUint;

use crate::fvector::binomial;

/// All ordered partitions of `items` into non-empty blocks.
///
/// The first block runs over non-empty subsets in increasing bitmask order,
/// so for `[p, q]` the result is `[[p],[q]]`, `[[q],[p]]`, `[[p,q]]`.
pub fn ordered_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    assert!(items.len() < 32, "too many items to partition");
    let mut out = Vec::new();
    let full = if items.is_empty() {
        0
    } else {
        (1u32 << items.len()) - 1
    };
    let mut prefix = Vec::new();
    fill(items, full, &mut prefix, &mut out);
    out
}

fn fill<T: Clone>(items: &[T], rest: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<Vec<T>>>) {
    if rest == 0 {
        out.push(
            prefix
                .iter()
                .map(|&mask| {
                    (0..items.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| items[i].clone())
                        .collect()
                })
                .collect(),
        );
        return;
    }
    let mut sub = 1u32;
    while sub <= rest {
        if sub & !rest == 0 {
            prefix.push(sub);
            fill(items, rest & !sub, prefix, out);
            prefix.pop();
        }
        sub += 1;
    }
}

/// Ordered Bell number: `a(m) = Σ_{j=1..m} C(m,j) a(m-j)`, `a(0) = 1`.
pub fn fubini(m: usize) -> BigUint {
    let mut a: Vec<BigUint> = vec![BigUint::from(1u32)];
    for n in 1..=m {
        let v = (1..=n).map(|j| binomial(n as u64, j as u64) * &a[n - j]).sum();
        a.push(v);
    }
    a.swap_remove(m)
}
