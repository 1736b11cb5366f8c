//! Box spectra: `λ = π² Σ (m_i / L_i)²` over `m ∈ ℤ₊ⁿ`, enumerated in order.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{Key, Spectrum};
use crate::error::{Error, Result};

/// Relative window inside which two float eigenvalues count as one level.
pub const TIE_WINDOW: f64 = 1e-12;

/// Integer weights `W_i` with `1/L_i² = W_i / D`, so that
/// `Σ m_i² / L_i² = (Σ m_i² W_i) / D` is compared exactly. `None` when the
/// weights do not fit comfortably in 64 bits.
pub(crate) fn integer_weights(lengths: &[BigRational]) -> Option<(Vec<u128>, u128)> {
    let inv_sq: Vec<BigRational> = lengths.iter().map(|l| (l * l).recip()).collect();
    let denom = inv_sq.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let weights: Option<Vec<u128>> = inv_sq
        .iter()
        .map(|r| (r.numer() * (&denom / r.denom())).to_u64().map(u128::from))
        .collect();
    Some((weights?, denom.to_u64()? as u128))
}

/// Pops the `count` smallest keys of a monotone lattice function. Every
/// neighbour `m + e_i` is pushed once, guarded by a visited set.
fn frontier<K: Ord + Copy>(n: usize, count: usize, key: impl Fn(&[u32]) -> Result<K>) -> Result<Vec<K>> {
    let start = vec![1u32; n];
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    heap.push(Reverse((key(&start)?, start.clone())));
    seen.insert(start);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Reverse((k, m)) = heap.pop().expect("lattice frontier never empties");
        for i in 0..n {
            let mut next = m.clone();
            next[i] += 1;
            if seen.insert(next.clone()) {
                heap.push(Reverse((key(&next)?, next)));
            }
        }
        out.push(k);
    }
    Ok(out)
}

/// First `count` eigenvalues of the box with the given side lengths. With
/// `exact` rational lengths ties are decided in integer arithmetic and tied
/// eigenvalues are bit-identical; otherwise ties use [`TIE_WINDOW`].
pub fn box_spectrum(lengths: &[f64], exact: Option<&[BigRational]>, count: usize, cap: usize) -> Result<Spectrum> {
    if lengths.len() < 2 {
        return Err(Error::InvalidDomain(format!("box needs n >= 2 sides, got {}", lengths.len())));
    }
    if lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(Error::InvalidDomain("box side lengths must be positive".into()));
    }
    if count > cap {
        return Err(Error::BudgetExceeded { requested: count, cap });
    }
    let n = lengths.len();
    let pi2 = PI * PI;
    if let Some((w, d)) = exact.and_then(integer_weights) {
        let keys = frontier(n, count, |m| {
            m.iter().zip(&w).try_fold(0u128, |acc, (&mi, &wi)| {
                (mi as u128 * mi as u128).checked_mul(wi).and_then(|t| acc.checked_add(t))
            })
            .ok_or_else(|| Error::NumericalFailure("lattice key overflow".into()))
        })?;
        let df = d as f64;
        return Spectrum::from_sorted(keys.into_iter().map(|k| k as f64 / df * pi2).collect());
    }
    let inv: Vec<f64> = lengths.iter().map(|l| 1.0 / (l * l)).collect();
    let keys = frontier(n, count, |m| {
        Ok(Key(m.iter().zip(&inv).map(|(&mi, wi)| (mi as f64) * (mi as f64) * wi).sum()))
    })?;
    let mut values: Vec<f64> = keys.into_iter().map(|k| k.0 * pi2).collect();
    for i in 1..values.len() {
        if values[i] - values[i - 1] <= TIE_WINDOW * values[i] {
            values[i] = values[i - 1];
        }
    }
    Spectrum::from_sorted(values)
}

/// Reference enumeration: every lattice point in a box large enough to
/// contain the first `count` modes, sorted. Only meant for small `count`.
pub fn brute_force_box(lengths: &[f64], count: usize) -> Vec<f64> {
    let n = lengths.len();
    let inv: Vec<f64> = lengths.iter().map(|l| 1.0 / (l * l)).collect();
    // The c^n points of {1..c}^n all lie below c² Σ 1/L_i².
    let c = (1..).find(|c: &usize| c.pow(n as u32) >= count).unwrap() as f64;
    let bound = c * c * inv.iter().sum::<f64>();
    let limits: Vec<u32> = lengths.iter().map(|l| (l * bound.sqrt()).floor() as u32 + 1).collect();
    let mut values = Vec::new();
    let mut m = vec![1u32; n];
    loop {
        let key: f64 = m.iter().zip(&inv).map(|(&mi, wi)| (mi as f64) * (mi as f64) * wi).sum();
        if key <= bound * (1.0 + 1e-12) {
            values.push(key * PI * PI);
        }
        let mut i = 0;
        loop {
            if i == n {
                values.sort_by(f64::total_cmp);
                values.truncate(count);
                return values;
            }
            m[i] += 1;
            if m[i] <= limits[i] {
                break;
            }
            m[i] = 1;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(ls: &[i64]) -> Vec<BigRational> {
        ls.iter().map(|&l| BigRational::from_integer(l.into())).collect()
    }

    #[test]
    fn unit_square_levels() {
        let s = box_spectrum(&[1.0, 1.0], Some(&exact(&[1, 1])), 10, 1_000_000).unwrap();
        let want = [2.0, 5.0, 5.0, 8.0, 10.0, 10.0, 13.0, 13.0, 17.0, 17.0];
        for (got, w) in s.eigenvalues().iter().zip(want) {
            assert!((got / (PI * PI) - w).abs() < 1e-14);
        }
        assert_eq!(s.eigenvalues()[1].to_bits(), s.eigenvalues()[2].to_bits());
        assert_eq!(s.levels()[1].1, 2);
    }

    #[test]
    fn cube_and_rectangle() {
        let cube = box_spectrum(&[1.0; 3], Some(&exact(&[1, 1, 1])), 1, 10).unwrap();
        assert!((cube.eigenvalues()[0] - 3.0 * PI * PI).abs() < 1e-13);
        let rect = box_spectrum(&[1.0, 2.0], Some(&exact(&[1, 2])), 1, 10).unwrap();
        assert!((rect.eigenvalues()[0] - 1.25 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn weights_for_rational_sides() {
        let ls = vec![BigRational::new(3.into(), 2.into()), BigRational::from_integer(1.into())];
        let (w, d) = integer_weights(&ls).unwrap();
        // 1/L² = 4/9 and 1.
        assert_eq!((w, d), (vec![4, 9], 9));
    }

    #[test]
    fn heap_matches_brute_force() {
        for ls in [vec![1.0, 1.3], vec![0.7, 1.1, 1.9], vec![2.0, 0.5]] {
            let heap = box_spectrum(&ls, None, 300, 1_000_000).unwrap();
            let brute = brute_force_box(&ls, 300);
            for (a, b) in heap.eigenvalues().iter().zip(&brute) {
                assert!((a - b).abs() <= 1e-12 * b);
            }
        }
    }

    #[test]
    fn budget() {
        assert_eq!(
            box_spectrum(&[1.0, 1.0], None, 11, 10).unwrap_err(),
            Error::BudgetExceeded { requested: 11, cap: 10 }
        );
    }
}
