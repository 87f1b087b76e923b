use serde::Serialize;

use crate::error::Result;
use crate::funtf::Frame;
use crate::tensor::{synthesize, SymTensor};

/// A frame with weights realizing `T = sum_j weights_j v_j^{⊗d}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    pub frame: Frame,
    pub weights: Vec<f64>,
    /// Max-norm coordinate residual against the tensor it was fitted to.
    pub fit_residual: f64,
}

impl Decomposition {
    /// Builds a decomposition and measures its residual against `target`.
    pub fn fitted(frame: Frame, weights: Vec<f64>, target: &SymTensor) -> Result<Self> {
        let synth = synthesize(frame.matrix(), &weights, target.d())?;
        let fit_residual = synth.max_diff(target)?;
        Ok(Decomposition {
            frame,
            weights,
            fit_residual,
        })
    }

    pub fn synthesize(&self, d: usize) -> Result<SymTensor> {
        synthesize(self.frame.matrix(), &self.weights, d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerifyReport {
    pub coord_residual: f64,
    pub frame_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Re-synthesizes `dec` and compares it with `target`. Passes when both the
/// coordinate residual and the funtf residual are at most `tol`.
pub fn verify_decomposition(target: &SymTensor, dec: &Decomposition, tol: f64) -> Result<VerifyReport> {
    let synth = dec.synthesize(target.d())?;
    let coord_residual = synth.max_diff(target)?;
    let frame_residual = dec.frame.residual();
    Ok(VerifyReport {
        coord_residual,
        frame_residual,
        tol,
        pass: coord_residual <= tol && frame_residual <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    #[test]
    fn zero_tensor_zero_weights_pass() {
        let t = SymTensor::zeros(3, 4).unwrap();
        let dec = Decomposition {
            frame: Frame::new(DMatrix::identity(3, 3)),
            weights: vec![0.0; 3],
            fit_residual: 0.0,
        };
        assert!(verify_decomposition(&t, &dec, 1e-12).unwrap().pass);
    }

    #[test]
    fn shape_mismatch_is_an_error() {
        let t = SymTensor::zeros(2, 4).unwrap();
        let dec = Decomposition {
            frame: Frame::new(DMatrix::identity(3, 3)),
            weights: vec![1.0; 3],
            fit_residual: 0.0,
        };
        assert!(verify_decomposition(&t, &dec, 1e-9).is_err());
    }
}
