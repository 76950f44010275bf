//! Multi-step forecasting by feeding one-step forecasts back as data.
//!
//! Unsupported and without accuracy guarantees; exposed only behind an
//! explicit opt-in on the command line.

use super::{convolve_at, PredictorKernel};
use crate::error::{Error, Result};
use crate::seq::SequenceWindow;

/// Forecasts of `x(1), ..., x(steps)` obtained by iterating the one-step
/// predictor on the window extended with its own forecasts.
pub fn iterate_forecast(w: &SequenceWindow, k: &PredictorKernel, steps: usize) -> Result<Vec<f64>> {
    if w.last_t() != 0 || w.is_empty() {
        return Err(Error::invalid("window", "forecasting needs a window ending at t = 0"));
    }
    if steps == 0 {
        return Err(Error::invalid("horizon", "must be at least 1"));
    }
    let mut values = w.values().to_vec();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let extended = SequenceWindow::new(values.clone())?;
        let next = convolve_at(k.taps(), &extended, 0);
        if !next.is_finite() {
            return Err(Error::invalid("horizon", "iterated forecast left the f64 range"));
        }
        out.push(next);
        values.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::predictor::{build_kernel, predict_one_step, KernelSpec};

    #[test]
    fn first_step_is_the_one_step_forecast() {
        let k = build_kernel(&KernelSpec::new(2.0, 1.5, 4.0).unwrap(), 4096, 1e-10).unwrap();
        let w = SequenceWindow::from_fn(200, |t| (0.2 * t as f64).cos()).unwrap();
        let path = iterate_forecast(&w, &k, 3).unwrap();
        assert_eq!(path.len(), 3);
        assert_eq!(path[0], predict_one_step(&w, &k).unwrap().forecast_next);
    }
}
