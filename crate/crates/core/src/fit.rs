//! Small least-squares fits: Gaussian widths from log-quadratics and pure
//! sinusoids in a known phase variable.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

fn least_squares(design: DMatrix<f64>, target: DVector<f64>) -> Result<DVector<f64>> {
    design
        .svd(true, true)
        .solve(&target, 1e-300)
        .map_err(|e| Error::InvalidParameter(format!("least squares failed: {e}")))
}

/// `ln y ≈ a + b x + c x²`, read as a Gaussian of variance `−1/(2c)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianWidthFit {
    pub log_peak: f64,
    pub linear: f64,
    pub curvature: f64,
    pub sigma_sqr: f64,
    pub center: f64,
    pub points_used: usize,
}

impl GaussianWidthFit {
    pub fn eval(&self, x: f64) -> f64 {
        (self.log_peak + self.linear * x + self.curvature * x * x).exp()
    }
}

/// Fits `ln y` to a quadratic on the points where `y > threshold`.
pub fn fit_gaussian_width(xs: &[f64], ys: &[f64], threshold: f64) -> Result<GaussianWidthFit> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(_, &y)| y > threshold)
        .map(|(&x, &y)| (x, y.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "only {} sweep points above the fit threshold; widen or refine the sweep",
            pts.len()
        )));
    }
    let design = DMatrix::from_fn(pts.len(), 3, |r, k| pts[r].0.powi(k as i32));
    let target = DVector::from_iterator(pts.len(), pts.iter().map(|p| p.1));
    let coef = least_squares(design, target)?;
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    if !(c < 0.0) {
        return Err(Error::Degenerate("log-overlap is not concave over the fit window"));
    }
    Ok(GaussianWidthFit {
        log_peak: a,
        linear: b,
        curvature: c,
        sigma_sqr: -1.0 / (2.0 * c),
        center: -b / (2.0 * c),
        points_used: pts.len(),
    })
}

/// `y ≈ A cos ψ + B sin ψ = R cos(ψ + δ)` for given phases `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SinusoidFit {
    pub amplitude: f64,
    pub phase_offset: f64,
    pub max_residual: f64,
}

pub fn fit_sinusoid(phases: &[f64], values: &[f64]) -> Result<SinusoidFit> {
    if phases.len() != values.len() || phases.len() < 2 {
        return Err(Error::InvalidParameter("sinusoid fit needs matching samples, at least two".into()));
    }
    let n = phases.len();
    let design = DMatrix::from_fn(n, 2, |r, k| if k == 0 { phases[r].cos() } else { phases[r].sin() });
    let target = DVector::from_column_slice(values);
    let coef = least_squares(design.clone(), target.clone())?;
    let residual = design * &coef - target;
    let (a, b) = (coef[0], coef[1]);
    Ok(SinusoidFit {
        amplitude: a.hypot(b),
        phase_offset: (-b).atan2(a),
        max_residual: residual.amax(),
    })
}
