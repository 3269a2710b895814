//! Dense tensor container with index valences and declared symmetries.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Valence {
    Up,
    Down,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    Symmetric(usize, usize),
    Antisymmetric(usize, usize),
    /// T_abcd = T_cdab on a rank-4 tensor.
    PairExchange,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TensorValue {
    pub valences: Vec<Valence>,
    pub dim: usize,
    pub entries: Vec<f64>,
    pub symmetries: Vec<Symmetry>,
}

impl TensorValue {
    pub fn zeros(valences: Vec<Valence>, dim: usize) -> Self {
        let len = dim.pow(valences.len() as u32);
        TensorValue { valences, dim, entries: vec![0.0; len], symmetries: Vec::new() }
    }

    /// Build from a closure over multi-indices.
    pub fn from_fn(valences: Vec<Valence>, dim: usize, f: impl Fn(&[usize]) -> f64) -> Self {
        let mut t = TensorValue::zeros(valences, dim);
        let mut idx = vec![0; t.rank()];
        for k in 0..t.entries.len() {
            t.unflatten(k, &mut idx);
            t.entries[k] = f(&idx);
        }
        t
    }

    pub fn with_symmetries(mut self, s: &[Symmetry]) -> Self {
        self.symmetries = s.to_vec();
        self
    }

    pub fn rank(&self) -> usize {
        self.valences.len()
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    fn unflatten(&self, mut k: usize, idx: &mut [usize]) {
        for slot in (0..idx.len()).rev() {
            idx[slot] = k % self.dim;
            k /= self.dim;
        }
    }

    pub fn get(&self, idx: &[usize]) -> f64 {
        self.entries[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: f64) {
        let k = self.flat(idx);
        self.entries[k] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &TensorValue) -> f64 {
        self.entries.iter().zip(&other.entries).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest violation over all declared symmetries.
    pub fn symmetry_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        let mut idx = vec![0; self.rank()];
        for k in 0..self.entries.len() {
            self.unflatten(k, &mut idx);
            let v = self.entries[k];
            for s in &self.symmetries {
                let mut j = idx.clone();
                let w = match *s {
                    Symmetry::Symmetric(a, b) => {
                        j.swap(a, b);
                        v - self.get(&j)
                    }
                    Symmetry::Antisymmetric(a, b) => {
                        j.swap(a, b);
                        v + self.get(&j)
                    }
                    Symmetry::PairExchange => {
                        j = vec![idx[2], idx[3], idx[0], idx[1]];
                        v - self.get(&j)
                    }
                };
                worst = worst.max(w.abs());
            }
        }
        worst
    }

    pub fn check_symmetries(&self, sym_tol: f64) -> Result<()> {
        let d = self.symmetry_defect();
        if d > sym_tol {
            return Err(Error::Inconsistent(format!("symmetry defect {d:e} > {sym_tol:e}")));
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        assert_eq!(self.rank(), 2, "to_matrix needs a rank-2 tensor");
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(&[i, j]))
    }

    pub fn from_matrix(m: &DMatrix<f64>, valences: [Valence; 2]) -> Self {
        TensorValue::from_fn(valences.to_vec(), m.nrows(), |i| m[(i[0], i[1])])
    }

    /// Contract slot `slot` with the rank-2 matrix `m`: T'..i.. = m_ij T..j..
    fn contract_slot(&self, slot: usize, m: &DMatrix<f64>, valence: Valence) -> TensorValue {
        let mut val = self.valences.clone();
        val[slot] = valence;
        let mut out = TensorValue::zeros(val, self.dim);
        let mut idx = vec![0; self.rank()];
        for k in 0..out.entries.len() {
            out.unflatten(k, &mut idx);
            let i = idx[slot];
            let mut j = idx.clone();
            let mut acc = 0.0;
            for c in 0..self.dim {
                j[slot] = c;
                acc += m[(i, c)] * self.get(&j);
            }
            out.entries[k] = acc;
        }
        out.symmetries = self.symmetries.clone();
        out.symmetries.retain(|s| match *s {
            Symmetry::Symmetric(a, b) | Symmetry::Antisymmetric(a, b) => a != slot && b != slot,
            Symmetry::PairExchange => false,
        });
        out
    }

    /// Trace over two slots of opposite valence.
    pub fn trace(&self, a: usize, b: usize) -> Result<TensorValue> {
        if a == b || self.valences[a] == self.valences[b] {
            return Err(Error::RejectedInput("trace needs two slots of opposite valence".into()));
        }
        let keep: Vec<usize> = (0..self.rank()).filter(|&s| s != a && s != b).collect();
        let val = keep.iter().map(|&s| self.valences[s]).collect();
        let out = TensorValue::from_fn(val, self.dim, |rest| {
            let mut full = vec![0; self.rank()];
            for (r, &s) in keep.iter().enumerate() {
                full[s] = rest[r];
            }
            (0..self.dim)
                .map(|c| {
                    full[a] = c;
                    full[b] = c;
                    self.get(&full)
                })
                .sum()
        });
        Ok(out)
    }
}

fn check_metric(g: &TensorValue, dim: usize) -> Result<()> {
    if g.rank() != 2 || g.dim != dim {
        return Err(Error::RejectedInput("metric must be rank 2 of matching dimension".into()));
    }
    Ok(())
}

/// Raise index `slot` with the inverse of the covariant metric `g`.
pub fn raise_index(t: &TensorValue, slot: usize, g: &TensorValue) -> Result<TensorValue> {
    check_metric(g, t.dim)?;
    if t.valences[slot] != Valence::Down {
        return Err(Error::RejectedInput("slot is already contravariant".into()));
    }
    let ginv = linalg::sym_inverse(&g.to_matrix())?;
    Ok(t.contract_slot(slot, &ginv, Valence::Up))
}

/// Lower index `slot` with the covariant metric `g`.
pub fn lower_index(t: &TensorValue, slot: usize, g: &TensorValue) -> Result<TensorValue> {
    check_metric(g, t.dim)?;
    if t.valences[slot] != Valence::Up {
        return Err(Error::RejectedInput("slot is already covariant".into()));
    }
    linalg::sym_inverse(&g.to_matrix())?;
    Ok(t.contract_slot(slot, &g.to_matrix(), Valence::Down))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Valence::*;

    #[test]
    fn flat_index_roundtrip() {
        let t = TensorValue::from_fn(vec![Down, Up, Down], 3, |i| (i[0] * 100 + i[1] * 10 + i[2]) as f64);
        assert_eq!(t.get(&[2, 0, 1]), 201.0);
    }

    #[test]
    fn symmetry_defect_detects_violation() {
        let mut t = TensorValue::from_fn(vec![Down, Down], 3, |i| (i[0] + i[1]) as f64)
            .with_symmetries(&[Symmetry::Symmetric(0, 1)]);
        assert_eq!(t.symmetry_defect(), 0.0);
        t.set(&[0, 1], 5.0);
        assert_eq!(t.symmetry_defect(), 4.0);
        assert!(t.check_symmetries(1e-12).is_err());
    }

    #[test]
    fn raise_then_trace() {
        let g = TensorValue::from_matrix(&DMatrix::from_diagonal(&nalgebra::dvector![2.0, 4.0]), [Down, Down]);
        let ric = TensorValue::from_matrix(&DMatrix::from_diagonal(&nalgebra::dvector![-1.0, -2.0]), [Down, Down]);
        let mixed = raise_index(&ric, 0, &g).unwrap();
        let s = mixed.trace(0, 1).unwrap();
        assert!((s.entries[0] - (-1.0)).abs() < 1e-15);
    }

    #[test]
    fn lowering_rejects_covariant_slot() {
        let g = TensorValue::from_matrix(&DMatrix::identity(2, 2), [Down, Down]);
        assert!(lower_index(&g, 0, &g).is_err());
    }
}
