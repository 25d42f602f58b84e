//! Refinement studies: residuals measured on successively halved spacings and the
//! observed order `log2(r_h / r_{h/2})`.

/// Residuals below this are treated as exact zeros (roundoff level).
pub const ROUNDOFF_FLOOR: f64 = 1e-11;

/// Outcome of a refinement study.
#[derive(Clone, Debug, PartialEq)]
pub struct Refinement {
    /// Points per refined axis at each level.
    pub levels: Vec<usize>,
    /// Max-norm residual at each level.
    pub residuals: Vec<f64>,
}

impl Refinement {
    /// Runs `residual(n)` for every level.
    pub fn run(levels: &[usize], mut residual: impl FnMut(usize) -> f64) -> Self {
        let residuals = levels.iter().map(|&n| residual(n)).collect();
        Refinement {
            levels: levels.to_vec(),
            residuals,
        }
    }

    /// Observed order between consecutive levels; `None` when both residuals are at roundoff.
    pub fn orders(&self) -> Vec<Option<f64>> {
        self.residuals
            .windows(2)
            .map(|w| {
                if w[0] < ROUNDOFF_FLOOR && w[1] < ROUNDOFF_FLOOR {
                    None
                } else {
                    Some((w[0] / w[1]).log2())
                }
            })
            .collect()
    }

    /// Order between the two finest levels.
    pub fn final_order(&self) -> Option<f64> {
        self.orders().last().copied().flatten()
    }

    /// True when every residual is at roundoff level.
    pub fn exact(&self) -> bool {
        self.residuals.iter().all(|r| *r < ROUNDOFF_FLOOR)
    }

    /// Converged with at least `min_order` on the finest pair, or exact.
    pub fn converges(&self, min_order: f64) -> bool {
        if self.residuals.iter().any(|r| !r.is_finite()) {
            return false;
        }
        if self.exact() {
            return true;
        }
        match self.orders().last() {
            Some(Some(o)) => *o >= min_order,
            Some(None) => true,
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_sequence() {
        let r = Refinement::run(&[8, 16, 32], |n| 3.0 / (n * n) as f64);
        assert!((r.final_order().unwrap() - 2.0).abs() < 1e-12);
        assert!(r.converges(1.9));
        let flat = Refinement::run(&[8, 16], |_| 0.5);
        assert!(!flat.converges(1.9));
        let exact = Refinement::run(&[8, 16], |_| 1e-15);
        assert!(exact.converges(1.9));
    }
}
