//! Classical emulation of entrywise oracle access to `b`, `C`, `A_i` and of
//! indexed (qRAM-style) reads of the labels and features. Every read is
//! counted in a caller-supplied [`QueryLedger`]; nothing is cached, so reads
//! always reflect the dataset currently attached.
//!
//! Indices are zero-based.

use crate::error::{Error, Result};
use crate::types::{validate_dataset, Dataset, LpLayout, QueryLedger, SparseSvmConfig};

#[derive(Debug, Clone)]
pub struct OracleSet<'a> {
    data: &'a Dataset,
    layout: LpLayout,
    lambda: f64,
    quantize_bits: Option<u32>,
}

impl<'a> OracleSet<'a> {
    /// Oracles for the LP that [`crate::formulation::build_lp`] would produce
    /// from the same dataset and config.
    pub fn new(data: &'a Dataset, cfg: &SparseSvmConfig) -> Result<Self> {
        validate_dataset(data)?;
        cfg.validate()?;
        let layout = if cfg.hard_margin {
            LpLayout { slack: 0, features: data.p() }
        } else {
            LpLayout { slack: data.m(), features: data.p() }
        };
        Ok(OracleSet { data, layout, lambda: cfg.lambda, quantize_bits: None })
    }

    /// Round every returned value to `bits` fractional binary digits, emulating
    /// a fixed-point register.
    pub fn with_quantization(mut self, bits: u32) -> Self {
        self.quantize_bits = Some(bits);
        self
    }

    /// Attach a different dataset of the same shape.
    pub fn set_dataset(&mut self, data: &'a Dataset) -> Result<()> {
        validate_dataset(data)?;
        if data.p() != self.layout.features
            || (!self.layout.is_hard() && data.m() != self.layout.slack)
        {
            return Err(Error::DimensionMismatch(format!(
                "oracle expects p={} (m={}), got p={}, m={}",
                self.layout.features,
                self.layout.slack,
                data.p(),
                data.m()
            )));
        }
        self.data = data;
        Ok(())
    }

    pub fn layout(&self) -> LpLayout {
        self.layout
    }

    pub fn num_constraints(&self) -> usize {
        self.data.m()
    }

    pub fn n(&self) -> usize {
        self.layout.n()
    }

    fn q(&self, v: f64) -> f64 {
        match self.quantize_bits {
            None => v,
            Some(bits) => {
                let scale = (bits as f64).exp2();
                (v * scale).round() / scale
            }
        }
    }

    fn check_constraint(&self, i: usize) -> Result<()> {
        if i >= self.data.m() {
            return Err(Error::IndexOutOfRange(format!(
                "constraint {} of {}",
                i,
                self.data.m()
            )));
        }
        Ok(())
    }

    fn check_variable(&self, k: usize) -> Result<()> {
        if k >= self.n() {
            return Err(Error::IndexOutOfRange(format!("variable {} of {}", k, self.n())));
        }
        Ok(())
    }

    pub fn query_b(&self, i: usize, ledger: &mut QueryLedger) -> Result<f64> {
        self.check_constraint(i)?;
        ledger.b_queries += 1;
        Ok(self.q(-1.0))
    }

    pub fn query_c(&self, k: usize, ledger: &mut QueryLedger) -> Result<f64> {
        self.check_variable(k)?;
        ledger.c_queries += 1;
        let v = if self.layout.is_hard() {
            1.0
        } else if k < self.layout.slack {
            1.0 / self.data.m() as f64
        } else {
            self.lambda
        };
        Ok(self.q(v))
    }

    /// Diagonal entry `A_i[k, k]`. Feature-block entries are composed from one
    /// label read and one feature read, both counted as data queries.
    pub fn query_a(&self, i: usize, k: usize, ledger: &mut QueryLedger) -> Result<f64> {
        self.check_constraint(i)?;
        self.check_variable(k)?;
        ledger.a_queries += 1;
        Ok(self.q(self.entry(i, k, ledger)))
    }

    fn entry(&self, i: usize, k: usize, ledger: &mut QueryLedger) -> f64 {
        let l = self.layout;
        if k < l.slack {
            return if k == i { -1.0 } else { 0.0 };
        }
        ledger.data_queries += 2;
        let yx = |j: usize| self.data.label(i) * self.data.feature(i, j);
        if k < l.beta_minus_offset() {
            -yx(k - l.beta_plus_offset())
        } else {
            yx(k - l.beta_minus_offset())
        }
    }

    pub fn qram_read(&self, i: usize, j: usize, ledger: &mut QueryLedger) -> Result<f64> {
        self.check_constraint(i)?;
        if j >= self.data.p() {
            return Err(Error::IndexOutOfRange(format!("feature {} of {}", j, self.data.p())));
        }
        ledger.data_queries += 1;
        Ok(self.q(self.data.feature(i, j)))
    }

    pub fn qram_label(&self, i: usize, ledger: &mut QueryLedger) -> Result<f64> {
        self.check_constraint(i)?;
        ledger.data_queries += 1;
        Ok(self.data.label(i))
    }

    /// Batched `out[k] = sum_i w[i] * A_i[k, k]`, counted as one `query_a` per
    /// matrix entry.
    pub fn a_transpose_times(&self, w: &[f64], out: &mut [f64], ledger: &mut QueryLedger) {
        let (m, l) = (self.data.m(), self.layout);
        assert_eq!(w.len(), m);
        assert_eq!(out.len(), l.n());
        let p = l.features;
        out.fill(0.0);
        for (i, &wi) in w.iter().enumerate() {
            if l.slack > 0 {
                out[i] = self.q(-1.0) * wi;
            }
            let y = self.data.label(i);
            let row = self.data.row(i);
            let (plus, minus) = out[l.slack..].split_at_mut(p);
            for j in 0..p {
                let v = self.q(y * row[j]);
                plus[j] -= wi * v;
                minus[j] += wi * v;
            }
        }
        ledger.a_queries += (m * l.n()) as u64;
        ledger.data_queries += (2 * m * 2 * p) as u64;
    }

    /// Batched read of column `k` of the constraint matrix (`A_i[k, k]` for all
    /// `i`), counted as `m` entry queries.
    pub fn a_column(&self, k: usize, out: &mut [f64], ledger: &mut QueryLedger) -> Result<()> {
        self.check_variable(k)?;
        assert_eq!(out.len(), self.data.m());
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.q(self.entry(i, k, ledger));
        }
        ledger.a_queries += self.data.m() as u64;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formulation::{build_hard_lp, build_soft_lp};

    fn data() -> Dataset {
        Dataset::new(
            vec![1.0, -1.0, 1.0, -1.0],
            vec![vec![2.0, 0.5], vec![1.0, -3.0], vec![0.25, 0.75], vec![-1.5, 2.0]],
        )
        .unwrap()
    }

    #[test]
    fn b_is_minus_one_in_range() {
        let d = data();
        let o = OracleSet::new(&d, &SparseSvmConfig::soft(0.1)).unwrap();
        let mut l = QueryLedger::new();
        assert_eq!(o.query_b(0, &mut l).unwrap(), -1.0);
        assert_eq!(o.query_b(3, &mut l).unwrap(), -1.0);
        assert!(o.query_b(4, &mut l).is_err());
        assert_eq!(l.b_queries, 2);
    }

    #[test]
    fn c_blocks() {
        let d = data();
        let o = OracleSet::new(&d, &SparseSvmConfig::soft(0.1)).unwrap();
        let mut l = QueryLedger::new();
        assert_eq!(o.query_c(1, &mut l).unwrap(), 0.25);
        assert_eq!(o.query_c(4, &mut l).unwrap(), 0.1);
        assert!(o.query_c(8, &mut l).is_err());
        assert_eq!(l.c_queries, 2);
    }

    #[test]
    fn a_slack_block_only_on_own_row() {
        let d = data();
        let o = OracleSet::new(&d, &SparseSvmConfig::soft(0.1)).unwrap();
        let mut l = QueryLedger::new();
        assert_eq!(o.query_a(0, 0, &mut l).unwrap(), -1.0);
        assert_eq!(o.query_a(0, 1, &mut l).unwrap(), 0.0);
        assert_eq!(l.data_queries, 0);
        assert!(o.query_a(4, 0, &mut l).is_err());
        assert!(o.query_a(0, 8, &mut l).is_err());
    }

    #[test]
    fn a_feature_blocks_single_sample() {
        let d = Dataset::new(vec![1.0], vec![vec![2.0]]).unwrap();
        let o = OracleSet::new(&d, &SparseSvmConfig::soft(0.1)).unwrap();
        let mut l = QueryLedger::new();
        assert_eq!(o.query_a(0, 1, &mut l).unwrap(), -2.0);
        assert_eq!(o.query_a(0, 2, &mut l).unwrap(), 2.0);
        assert_eq!(l.a_queries, 2);
        assert_eq!(l.data_queries, 4);
    }

    #[test]
    fn matches_formulation_exhaustively() {
        let d = data();
        for cfg in [SparseSvmConfig::soft(0.3), SparseSvmConfig::hard()] {
            let lp = if cfg.hard_margin {
                build_hard_lp(&d).unwrap()
            } else {
                build_soft_lp(&d, &cfg).unwrap()
            };
            let o = OracleSet::new(&d, &cfg).unwrap();
            let mut l = QueryLedger::new();
            for i in 0..lp.num_constraints {
                assert_eq!(o.query_b(i, &mut l).unwrap(), lp.b[i]);
                for k in 0..lp.n {
                    assert_eq!(o.query_a(i, k, &mut l).unwrap(), lp.a(i, k));
                }
            }
            for k in 0..lp.n {
                assert_eq!(o.query_c(k, &mut l).unwrap(), lp.c_diag[k]);
            }
        }
    }

    #[test]
    fn batched_reads_match_entrywise() {
        let d = data();
        let cfg = SparseSvmConfig::soft(0.3);
        let lp = build_soft_lp(&d, &cfg).unwrap();
        let o = OracleSet::new(&d, &cfg).unwrap();
        let mut l = QueryLedger::new();
        let w = [0.1, 0.2, 0.3, 0.4];
        let mut g = vec![0.0; lp.n];
        o.a_transpose_times(&w, &mut g, &mut l);
        assert_eq!(l.a_queries, (4 * lp.n) as u64);
        for k in 0..lp.n {
            let expect: f64 = (0..4).map(|i| w[i] * lp.a(i, k)).sum();
            assert!((g[k] - expect).abs() < 1e-14);
        }
        let mut col = vec![0.0; 4];
        o.a_column(5, &mut col, &mut l).unwrap();
        for i in 0..4 {
            assert_eq!(col[i], lp.a(i, 5));
        }
    }

    #[test]
    fn qram_reads_and_counts() {
        let d = Dataset::new(vec![1.0, -1.0], vec![vec![0.5, 1.0], vec![2.0, 3.0]]).unwrap();
        let o = OracleSet::new(&d, &SparseSvmConfig::soft(0.1)).unwrap();
        let mut l = QueryLedger::new();
        assert_eq!(o.qram_read(0, 0, &mut l).unwrap(), 0.5);
        l.reset();
        for i in 0..2 {
            for j in 0..2 {
                o.qram_read(i, j, &mut l).unwrap();
            }
        }
        assert_eq!(l.data_queries, 4);
        assert!(o.qram_read(0, 2, &mut l).is_err());
    }

    #[test]
    fn reads_follow_dataset_swap() {
        let d1 = Dataset::new(vec![1.0], vec![vec![0.5]]).unwrap();
        let d2 = Dataset::new(vec![1.0], vec![vec![-4.0]]).unwrap();
        let mut o = OracleSet::new(&d1, &SparseSvmConfig::soft(0.1)).unwrap();
        let mut l = QueryLedger::new();
        assert_eq!(o.qram_read(0, 0, &mut l).unwrap(), 0.5);
        o.set_dataset(&d2).unwrap();
        assert_eq!(o.qram_read(0, 0, &mut l).unwrap(), -4.0);
        let wrong = Dataset::new(vec![1.0], vec![vec![1.0, 2.0]]).unwrap();
        assert!(o.set_dataset(&wrong).is_err());
    }

    #[test]
    fn quantization_rounds_to_fixed_point() {
        let d = Dataset::new(vec![1.0], vec![vec![0.3]]).unwrap();
        let o = OracleSet::new(&d, &SparseSvmConfig::soft(0.1)).unwrap().with_quantization(2);
        let mut l = QueryLedger::new();
        assert_eq!(o.qram_read(0, 0, &mut l).unwrap(), 0.25);
        assert_eq!(o.query_c(1, &mut l).unwrap(), 0.0);
        assert_eq!(o.query_b(0, &mut l).unwrap(), -1.0);
    }
}
