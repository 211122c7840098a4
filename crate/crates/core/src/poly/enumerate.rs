use std::ops::Range;

use super::Poly;
use crate::error::{Error, Result};
use crate::field::FieldSpec;

/// Number of monic polynomials of degree `n`, if it fits in a `u64`.
pub fn monic_count(field: FieldSpec, n: usize) -> Option<u64> {
    field.q().checked_pow(n as u32)
}

/// Cardinality of the square-free ensemble of degree 2g+1: (q-1) q^{2g}
/// for g >= 1, and q for g = 0 (every linear polynomial is square-free).
pub fn ensemble_size(field: FieldSpec, g: usize) -> u128 {
    let q = field.q() as u128;
    if g == 0 {
        q
    } else {
        (q - 1) * q.pow(2 * g as u32)
    }
}

/// The monic polynomial of degree `n` at position `index` of the
/// enumeration: coefficient `c_i` is the i-th base-q digit of `index`.
pub fn monic_at(field: FieldSpec, n: usize, mut index: u64) -> Poly {
    let q = field.q();
    let mut coeffs = Vec::with_capacity(n + 1);
    for _ in 0..n {
        coeffs.push((index % q) as u32);
        index /= q;
    }
    coeffs.push(1);
    Poly::from_raw(field, coeffs)
}

/// Streams monic polynomials of a fixed degree over an index range.
///
/// Order is lexicographic on (c_{n-1}, ..., c_0), i.e. increasing index with
/// c_0 varying fastest. Disjoint index ranges partition the enumeration.
#[derive(Clone, Debug)]
pub struct MonicRange {
    field: FieldSpec,
    degree: usize,
    next: u64,
    end: u64,
    digits: Vec<u32>,
}

impl MonicRange {
    pub fn new(field: FieldSpec, degree: usize, range: Range<u64>) -> Self {
        let total = monic_count(field, degree).expect("monic enumeration exceeds u64 range");
        let end = range.end.min(total);
        let start = range.start.min(end);
        let digits = monic_at(field, degree, start).coeffs()[..degree].to_vec();
        MonicRange { field, degree, next: start, end, digits }
    }

    /// Restarts the stream at `index`.
    pub fn starting_at(self, index: u64) -> Self {
        MonicRange::new(self.field, self.degree, index..self.end)
    }

    pub fn position(&self) -> u64 {
        self.next
    }

    fn advance_digits(&mut self) {
        let p = self.field.p();
        for d in self.digits.iter_mut() {
            *d += 1;
            if *d < p {
                return;
            }
            *d = 0;
        }
    }
}

impl Iterator for MonicRange {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.next >= self.end {
            return None;
        }
        let mut coeffs = Vec::with_capacity(self.degree + 1);
        coeffs.extend_from_slice(&self.digits);
        coeffs.push(1);
        self.next += 1;
        self.advance_digits();
        Some(Poly::from_raw(self.field, coeffs))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = (self.end - self.next) as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for MonicRange {}

/// All monic polynomials of degree `n`, exactly q^n of them.
pub fn enumerate_monic(field: FieldSpec, n: usize) -> MonicRange {
    MonicRange::new(field, n, 0..u64::MAX)
}

/// Monic square-free polynomials of degree 2g+1 within an index range of
/// the underlying monic enumeration.
#[derive(Clone, Debug)]
pub struct EnsembleRange {
    inner: MonicRange,
}

impl EnsembleRange {
    pub fn new(field: FieldSpec, g: usize, range: Range<u64>) -> Result<Self> {
        field.require_ensemble()?;
        Ok(EnsembleRange { inner: MonicRange::new(field, 2 * g + 1, range) })
    }
}

impl Iterator for EnsembleRange {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        self.inner.by_ref().find(|d| d.is_squarefree().expect("monic is nonzero"))
    }
}

/// Calls `visit` with the raw coefficients of every monic polynomial of
/// degree `n` in `range`, without allocating a `Poly` per item.
pub(crate) fn visit_monic(field: FieldSpec, n: usize, range: Range<u64>, mut visit: impl FnMut(&[u32])) {
    let total = monic_count(field, n).expect("monic enumeration exceeds u64 range");
    let end = range.end.min(total);
    let start = range.start.min(end);
    let mut buf = monic_at(field, n, start).coeffs().to_vec();
    let p = field.p();
    for _ in start..end {
        visit(&buf);
        for d in buf[..n].iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
}

/// The ensemble of monic square-free discriminants of degree 2g+1.
pub fn enumerate_ensemble(field: FieldSpec, g: usize) -> Result<EnsembleRange> {
    if monic_count(field, 2 * g + 1).is_none() {
        return Err(Error::Unsupported(format!("ensemble of genus {g} over {field} is too large")));
    }
    EnsembleRange::new(field, g, 0..u64::MAX)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    #[test]
    fn monic_examples() {
        let f5 = FieldSpec::new(5).unwrap();
        let v: Vec<Poly> = enumerate_monic(f5, 0).collect();
        assert_eq!(v, vec![Poly::one(f5)]);
        let v: Vec<Poly> = enumerate_monic(f5, 1).collect();
        assert_eq!(v.len(), 5);
        assert!(v.iter().all(|f| f.deg() == Some(1) && f.is_monic()));
        let v: Vec<Poly> = enumerate_monic(f5, 3).collect();
        assert_eq!(v.len(), 125);
        assert_eq!(v.iter().collect::<HashSet<_>>().len(), 125);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        for (i, f) in v.iter().enumerate() {
            assert_eq!(*f, monic_at(f5, 3, i as u64));
        }
    }

    #[test]
    fn ranges_partition_and_restart() {
        let f13 = FieldSpec::new(13).unwrap();
        let all: Vec<Poly> = enumerate_monic(f13, 2).collect();
        let mut pieces: Vec<Poly> = Vec::new();
        for k in 0..7u64 {
            pieces.extend(MonicRange::new(f13, 2, k * 25..(k + 1) * 25));
        }
        assert_eq!(all, pieces);
        let tail: Vec<Poly> = enumerate_monic(f13, 2).starting_at(100).collect();
        assert_eq!(tail, all[100..]);
    }

    #[test]
    fn ensemble_cardinality() {
        let f5 = FieldSpec::new(5).unwrap();
        for g in 0..=3 {
            let mut n = 0u128;
            for d in enumerate_ensemble(f5, g).unwrap() {
                assert!(d.is_monic() && d.deg() == Some(2 * g + 1));
                n += 1;
            }
            assert_eq!(n, ensemble_size(f5, g));
        }
        assert_eq!(ensemble_size(f5, 0), 5);
        assert_eq!(ensemble_size(f5, 1), 100);
        assert_eq!(ensemble_size(f5, 2), 2500);
    }

    #[test]
    fn ensemble_rejects_bad_fields() {
        let f7 = FieldSpec::new(7).unwrap();
        assert_eq!(enumerate_ensemble(f7, 1).err(), Some(Error::BadFieldForEnsemble(7)));
        let f2 = FieldSpec::new(2).unwrap();
        assert_eq!(enumerate_ensemble(f2, 1).err(), Some(Error::BadFieldForEnsemble(2)));
    }
}
