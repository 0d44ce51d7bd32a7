//! Nonlinear least squares.
//!
//! [`lm_fit`] minimises Σ((yᵢ − f(p, xᵢ))/σᵢ)² with a classical
//! Levenberg–Marquardt iteration on a numerically differentiated Jacobian.
//! Bounded parameters are mapped to an unconstrained internal coordinate, so
//! the iteration itself never sees a constraint. Fixed parameters are simply
//! left out of the internal vector.
//!
//! Standard errors come from the inverse of JᵀWJ at the solution. For
//! unweighted problems (no σ supplied) the covariance is rescaled by χ²/dof;
//! for weighted problems σ is taken as absolute.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub mod adapters;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least {required} data points, got {points}")]
    TooFewPoints { points: usize, required: usize },

    #[error("σ of data point {index} must be finite and > 0 (either every point carries σ or none does)")]
    InvalidSigma { index: usize },

    #[error("data have zero variance: every y value is identical")]
    ZeroVariance,

    #[error("parameter `{parameter}` is not identifiable from the data")]
    Unidentifiable { parameter: String },

    #[error("fit did not converge after {iterations} iterations (χ² = {chi2:e})")]
    NotConverged { iterations: usize, chi2: f64 },

    #[error("non-finite value in {what}")]
    NonFinite { what: String },

    #[error("unknown parameter `{name}`")]
    UnknownParameter { name: String },

    #[error("initial value of `{parameter}` lies outside its bounds")]
    InitialOutOfBounds { parameter: String },

    #[error("expected {expected} values, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Model<X> = Box<dyn Fn(&[f64], &X) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Bounds {
    #[default]
    Free,
    Lower(f64),
    Upper(f64),
    /// Two-sided, mapped through a logistic function.
    Range(f64, f64),
}

impl Bounds {
    fn contains(self, v: f64) -> bool {
        match self {
            Bounds::Free => true,
            Bounds::Lower(lo) => v > lo,
            Bounds::Upper(hi) => v < hi,
            Bounds::Range(lo, hi) => v > lo && v < hi,
        }
    }

    fn to_internal(self, p: f64) -> f64 {
        match self {
            Bounds::Free => p,
            Bounds::Lower(lo) => (p - lo).ln(),
            Bounds::Upper(hi) => (hi - p).ln(),
            Bounds::Range(lo, hi) => {
                let t = (p - lo) / (hi - lo);
                (t / (1.0 - t)).ln()
            }
        }
    }

    fn to_external(self, u: f64) -> f64 {
        match self {
            Bounds::Free => u,
            Bounds::Lower(lo) => lo + u.exp(),
            Bounds::Upper(hi) => hi - u.exp(),
            Bounds::Range(lo, hi) => lo + (hi - lo) / (1.0 + (-u).exp()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DataPoint<X> {
    pub x: X,
    pub y: f64,
    pub sigma: Option<f64>,
}

impl<X> DataPoint<X> {
    pub fn new(x: X, y: f64) -> Self {
        Self { x, y, sigma: None }
    }

    pub fn with_sigma(x: X, y: f64, sigma: f64) -> Self {
        Self {
            x,
            y,
            sigma: Some(sigma),
        }
    }
}

/// A model, its data and the starting point of a fit.
pub struct FitProblem<X> {
    names: Vec<String>,
    model: Model<X>,
    data: Vec<DataPoint<X>>,
    initial: Vec<f64>,
    bounds: Vec<Bounds>,
    fixed: Vec<bool>,
    steps: Vec<Option<f64>>,
}

impl<X> fmt::Debug for FitProblem<X> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FitProblem")
            .field("names", &self.names)
            .field("points", &self.data.len())
            .field("initial", &self.initial)
            .field("bounds", &self.bounds)
            .field("fixed", &self.fixed)
            .finish()
    }
}

impl<X> FitProblem<X> {
    pub fn new<F>(names: &[&str], initial: Vec<f64>, model: F, data: Vec<DataPoint<X>>) -> Result<Self, FitError>
    where
        F: Fn(&[f64], &X) -> f64 + Send + Sync + 'static,
    {
        if names.len() != initial.len() {
            return Err(FitError::DimensionMismatch {
                expected: names.len(),
                got: initial.len(),
            });
        }
        let n = names.len();
        Ok(Self {
            names: names.iter().map(|s| s.to_string()).collect(),
            model: Box::new(model),
            data,
            initial,
            bounds: vec![Bounds::Free; n],
            fixed: vec![false; n],
            steps: vec![None; n],
        })
    }

    pub fn index_of(&self, name: &str) -> Result<usize, FitError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| FitError::UnknownParameter { name: name.into() })
    }

    pub fn with_bounds(mut self, name: &str, bounds: Bounds) -> Result<Self, FitError> {
        let i = self.index_of(name)?;
        self.bounds[i] = bounds;
        Ok(self)
    }

    /// Holds `name` at its initial value.
    pub fn fix(mut self, name: &str) -> Result<Self, FitError> {
        let i = self.index_of(name)?;
        self.fixed[i] = true;
        Ok(self)
    }

    /// Holds `name` at `value`.
    pub fn fix_at(mut self, name: &str, value: f64) -> Result<Self, FitError> {
        let i = self.index_of(name)?;
        self.initial[i] = value;
        self.fixed[i] = true;
        Ok(self)
    }

    pub fn release(mut self, name: &str) -> Result<Self, FitError> {
        let i = self.index_of(name)?;
        self.fixed[i] = false;
        Ok(self)
    }

    /// Absolute finite-difference step for `name`, in parameter units.
    pub fn with_step(mut self, name: &str, step: f64) -> Result<Self, FitError> {
        let i = self.index_of(name)?;
        self.steps[i] = Some(step);
        Ok(self)
    }

    pub fn with_initial(mut self, initial: Vec<f64>) -> Result<Self, FitError> {
        if initial.len() != self.names.len() {
            return Err(FitError::DimensionMismatch {
                expected: self.names.len(),
                got: initial.len(),
            });
        }
        self.initial = initial;
        Ok(self)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn data(&self) -> &[DataPoint<X>] {
        &self.data
    }

    pub fn initial(&self) -> &[f64] {
        &self.initial
    }

    pub fn is_fixed(&self, name: &str) -> Result<bool, FitError> {
        Ok(self.fixed[self.index_of(name)?])
    }

    pub fn n_params(&self) -> usize {
        self.names.len()
    }

    pub fn n_free(&self) -> usize {
        self.fixed.iter().filter(|f| !**f).count()
    }

    pub fn free_names(&self) -> Vec<&str> {
        self.names
            .iter()
            .zip(&self.fixed)
            .filter(|(_, f)| !**f)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    pub fn weighted(&self) -> bool {
        self.data.first().is_some_and(|d| d.sigma.is_some())
    }

    /// Model prediction at `x`.
    pub fn eval(&self, params: &[f64], x: &X) -> f64 {
        (self.model)(params, x)
    }

    pub fn validate(&self) -> Result<(), FitError> {
        let required = 3.max(self.n_free() + 1);
        if self.data.len() < required {
            return Err(FitError::TooFewPoints {
                points: self.data.len(),
                required,
            });
        }
        let weighted = self.weighted();
        for (i, d) in self.data.iter().enumerate() {
            if !d.y.is_finite() {
                return Err(FitError::NonFinite {
                    what: format!("y of data point {i}"),
                });
            }
            match (weighted, d.sigma) {
                (true, Some(s)) if s > 0.0 && s.is_finite() => {}
                (false, None) => {}
                _ => return Err(FitError::InvalidSigma { index: i }),
            }
        }
        let first = self.data[0].y;
        if self.data.iter().all(|d| d.y == first) {
            return Err(FitError::ZeroVariance);
        }
        for (i, &p) in self.initial.iter().enumerate() {
            if !p.is_finite() {
                return Err(FitError::NonFinite {
                    what: format!("initial value of `{}`", self.names[i]),
                });
            }
            if !self.fixed[i] && !self.bounds[i].contains(p) {
                return Err(FitError::InitialOutOfBounds {
                    parameter: self.names[i].clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LmOptions {
    pub max_iterations: usize,
    /// Converged when an accepted step reduces χ² by less than this fraction.
    pub chi2_tol: f64,
    /// Converged when no parameter moves by more than this fraction of its
    /// scale.
    pub step_tol: f64,
    pub lambda_initial: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            chi2_tol: 1e-10,
            step_tol: 1e-12,
            lambda_initial: 1e-3,
        }
    }
}

const LAMBDA_MIN: f64 = 1e-12;
const LAMBDA_MAX: f64 = 1e12;
/// Central-difference step as a fraction of the parameter scale (≈ ε^⅓).
const REL_STEP: f64 = 6e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub names: Vec<String>,
    pub params: Vec<f64>,
    /// Zero for fixed parameters.
    pub std_errors: Vec<f64>,
    /// Full n×n matrix; rows and columns of fixed parameters are zero.
    pub covariance: DMatrix<f64>,
    pub chi2: f64,
    pub dof: usize,
    pub converged: bool,
    pub iterations: usize,
    pub weighted: bool,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.params[i])
    }

    pub fn std_error(&self, name: &str) -> Option<f64> {
        self.index(name).map(|i| self.std_errors[i])
    }

    pub fn reduced_chi2(&self) -> f64 {
        self.chi2 / self.dof as f64
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Free-parameter bookkeeping shared by the iteration and the covariance.
struct Layout<'a, X> {
    problem: &'a FitProblem<X>,
    free: Vec<usize>,
    inv_sigma: Vec<f64>,
    /// Characteristic magnitude of each free parameter in internal units.
    scale: Vec<f64>,
    /// Caller-supplied absolute steps, only for unbounded parameters.
    step: Vec<Option<f64>>,
}

impl<'a, X> Layout<'a, X> {
    fn new(problem: &'a FitProblem<X>) -> Self {
        let free: Vec<usize> = (0..problem.n_params()).filter(|&i| !problem.fixed[i]).collect();
        let inv_sigma = problem
            .data
            .iter()
            .map(|d| d.sigma.map_or(1.0, |s| 1.0 / s))
            .collect();
        let scale = free
            .iter()
            .map(|&i| match problem.bounds[i] {
                Bounds::Free => problem.steps[i]
                    .map(|h| h / REL_STEP)
                    .unwrap_or_else(|| problem.initial[i].abs().max(1e-3)),
                _ => 1.0,
            })
            .collect();
        let step = free
            .iter()
            .map(|&i| match problem.bounds[i] {
                Bounds::Free => problem.steps[i],
                _ => None,
            })
            .collect();
        Self {
            problem,
            free,
            inv_sigma,
            scale,
            step,
        }
    }

    fn internal(&self, params: &[f64]) -> DVector<f64> {
        DVector::from_iterator(
            self.free.len(),
            self.free
                .iter()
                .map(|&i| self.problem.bounds[i].to_internal(params[i])),
        )
    }

    fn external(&self, u: &DVector<f64>) -> Vec<f64> {
        let mut p = self.problem.initial.clone();
        for (k, &i) in self.free.iter().enumerate() {
            p[i] = self.problem.bounds[i].to_external(u[k]);
        }
        p
    }

    /// Weighted residuals (y − f)/σ; `None` when the model is not finite.
    fn residuals(&self, params: &[f64]) -> Option<DVector<f64>> {
        let data = &self.problem.data;
        let mut r = DVector::zeros(data.len());
        for (i, d) in data.iter().enumerate() {
            let v = (d.y - self.problem.eval(params, &d.x)) * self.inv_sigma[i];
            if !v.is_finite() {
                return None;
            }
            r[i] = v;
        }
        Some(r)
    }

    /// ∂r/∂u by central differences in internal coordinates.
    fn jacobian_internal(&self, u: &DVector<f64>) -> Result<DMatrix<f64>, FitError> {
        let m = self.problem.data.len();
        let mut jac = DMatrix::zeros(m, self.free.len());
        for k in 0..self.free.len() {
            let h = self.step[k].unwrap_or_else(|| REL_STEP * u[k].abs().max(self.scale[k]));
            let mut up = u.clone();
            let mut down = u.clone();
            up[k] += h;
            down[k] -= h;
            let (Some(rp), Some(rm)) = (
                self.residuals(&self.external(&up)),
                self.residuals(&self.external(&down)),
            ) else {
                return Err(FitError::NonFinite {
                    what: format!("Jacobian column of `{}`", self.problem.names[self.free[k]]),
                });
            };
            jac.set_column(k, &((rp - rm) / (2.0 * h)));
        }
        Ok(jac)
    }

    /// ∂f/∂p for the free parameters, unweighted, in parameter units.
    fn model_jacobian(&self, params: &[f64]) -> DMatrix<f64> {
        let data = &self.problem.data;
        let mut jac = DMatrix::zeros(data.len(), self.free.len());
        for (k, &i) in self.free.iter().enumerate() {
            let h = self.problem.steps[i]
                .unwrap_or_else(|| REL_STEP * params[i].abs().max(self.problem.initial[i].abs()).max(1e-3));
            let mut up = params.to_vec();
            let mut down = params.to_vec();
            up[i] += h;
            down[i] -= h;
            for (row, d) in data.iter().enumerate() {
                jac[(row, k)] = (self.problem.eval(&up, &d.x) - self.problem.eval(&down, &d.x)) / (2.0 * h);
            }
        }
        jac
    }

    fn unidentifiable(&self, normal: &DMatrix<f64>) -> FitError {
        // Blame the parameter with the largest weight in the weakest direction.
        let eig = normal.clone().symmetric_eigen();
        let weakest = eig
            .eigenvalues
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let vec = eig.eigenvectors.column(weakest);
        let k = vec
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        FitError::Unidentifiable {
            parameter: self.problem.names[self.free[k]].clone(),
        }
    }
}

/// ∂f/∂p of the model at `params` for every free parameter, one row per data
/// point.
pub fn numeric_jacobian<X>(problem: &FitProblem<X>, params: &[f64]) -> DMatrix<f64> {
    Layout::new(problem).model_jacobian(params)
}

/// Levenberg–Marquardt fit.
///
/// A run that exhausts `max_iterations` is not an error: the best parameters
/// found are returned with `converged == false`.
pub fn lm_fit<X>(problem: &FitProblem<X>, opts: &LmOptions) -> Result<FitResult, FitError> {
    problem.validate()?;
    let layout = Layout::new(problem);
    let n_free = layout.free.len();
    let m = problem.data.len();

    let mut u = layout.internal(&problem.initial);
    let mut params = layout.external(&u);
    let mut r = layout.residuals(&params).ok_or_else(|| FitError::NonFinite {
        what: "model at the initial parameters".into(),
    })?;
    let mut chi2 = r.norm_squared();
    let chi2_start = chi2;
    let mut lambda = opts.lambda_initial;
    let mut converged = n_free == 0;
    let mut iterations = 0;

    while !converged && iterations < opts.max_iterations {
        iterations += 1;
        let jac = layout.jacobian_internal(&u)?;
        // Only checked at the start: a parameter pinned against a bound
        // legitimately loses its column later on.
        for k in 0..n_free * usize::from(iterations == 1) {
            if jac.column(k).iter().all(|&v| v == 0.0) {
                return Err(FitError::Unidentifiable {
                    parameter: problem.names[layout.free[k]].clone(),
                });
            }
        }
        let normal = jac.transpose() * &jac;
        let gradient = -(jac.transpose() * &r);

        let diag_max = normal.diagonal().max();
        let mut accepted = false;
        while lambda <= LAMBDA_MAX {
            let mut damped = normal.clone();
            for k in 0..n_free {
                damped[(k, k)] += lambda * normal[(k, k)].max(1e-12 * diag_max);
            }
            let Some(step) = damped.cholesky().map(|c| c.solve(&gradient)) else {
                lambda *= 10.0;
                continue;
            };
            let u_trial = &u + &step;
            let p_trial = layout.external(&u_trial);
            let trial = layout
                .residuals(&p_trial)
                .map(|r| (r.norm_squared(), r))
                .filter(|(c, _)| c.is_finite());
            match trial {
                Some((chi2_trial, r_trial)) if chi2_trial < chi2 => {
                    let reduction = (chi2 - chi2_trial) / chi2;
                    let moved = step
                        .iter()
                        .enumerate()
                        .map(|(k, d)| {
                            let s = if layout.step[k].is_some() {
                                layout.scale[k]
                            } else {
                                layout.scale[k].max(u[k].abs())
                            };
                            d.abs() / s
                        })
                        .fold(0.0, f64::max);
                    u = u_trial;
                    params = p_trial;
                    r = r_trial;
                    chi2 = chi2_trial;
                    lambda = (lambda / 10.0).max(LAMBDA_MIN);
                    accepted = true;
                    if reduction < opts.chi2_tol || moved < opts.step_tol || chi2 <= 1e-24 * chi2_start {
                        converged = true;
                    }
                    break;
                }
                _ => lambda *= 10.0,
            }
        }
        if !accepted {
            // No damping reduces χ². That is a minimum when the local model
            // promises nothing more (or the residual is already at rounding
            // level); otherwise the iteration is stuck.
            let predicted = normal
                .clone()
                .cholesky()
                .map(|c| gradient.dot(&c.solve(&gradient)))
                .unwrap_or(f64::INFINITY);
            converged = predicted <= 1e-6 * chi2 || chi2 <= 1e-24 * chi2_start.max(f64::MIN_POSITIVE);
            break;
        }
    }

    let weighted = problem.weighted();
    let dof = m - n_free;
    let n = problem.n_params();
    let mut covariance = DMatrix::zeros(n, n);
    if n_free > 0 {
        let jac = layout.model_jacobian(&params);
        let w = DVector::from_vec(layout.inv_sigma.clone());
        let jw = DMatrix::from_fn(m, n_free, |i, k| jac[(i, k)] * w[i]);
        let normal = jw.transpose() * &jw;
        let inv = normal
            .clone()
            .cholesky()
            .map(|c| c.inverse())
            .ok_or_else(|| layout.unidentifiable(&normal))?;
        let factor = if weighted { 1.0 } else { chi2 / dof as f64 };
        for (a, &i) in layout.free.iter().enumerate() {
            for (b, &j) in layout.free.iter().enumerate() {
                covariance[(i, j)] = inv[(a, b)] * factor;
            }
        }
    }
    let std_errors = (0..n).map(|i| covariance[(i, i)].max(0.0).sqrt()).collect();

    Ok(FitResult {
        names: problem.names.clone(),
        params,
        std_errors,
        covariance,
        chi2,
        dof,
        converged,
        iterations,
        weighted,
    })
}

/// First-order uncertainty of a derived quantity: σ_f = √(∇fᵀ·C·∇f), with a
/// central-difference gradient of step max(1e-8, 1e-6·|pᵢ|).
pub fn propagate_error<F>(f: F, params: &[f64], covariance: &DMatrix<f64>) -> Result<f64, FitError>
where
    F: Fn(&[f64]) -> f64,
{
    let n = params.len();
    if covariance.nrows() != n || covariance.ncols() != n {
        return Err(FitError::DimensionMismatch {
            expected: n,
            got: covariance.nrows(),
        });
    }
    let mut grad = DVector::zeros(n);
    let mut p = params.to_vec();
    for i in 0..n {
        if covariance.row(i).iter().all(|&c| c == 0.0) {
            continue;
        }
        let h = (1e-6 * params[i].abs()).max(1e-8);
        p[i] = params[i] + h;
        let up = f(&p);
        p[i] = params[i] - h;
        let down = f(&p);
        p[i] = params[i];
        grad[i] = (up - down) / (2.0 * h);
        if !grad[i].is_finite() {
            return Err(FitError::NonFinite {
                what: format!("gradient component {i}"),
            });
        }
    }
    let var = grad.dot(&(covariance * &grad));
    Ok(var.max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_problem(xs: &[f64], a: f64, b: f64) -> FitProblem<f64> {
        let data = xs.iter().map(|&x| DataPoint::new(x, a * x + b)).collect();
        FitProblem::new(&["a", "b"], vec![0.0, 0.0], |p: &[f64], x: &f64| p[0] * x + p[1], data).unwrap()
    }

    #[test]
    fn linear_model_is_recovered_exactly() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64 * 0.5).collect();
        let problem = line_problem(&xs, 2.5, -1.25);
        let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
        assert!(fit.converged);
        assert!((fit.params[0] - 2.5).abs() < 1e-10);
        assert!((fit.params[1] + 1.25).abs() < 1e-10);
        assert!(fit.chi2 < 1e-20, "{}", fit.chi2);
        assert!(fit.iterations <= 4, "{}", fit.iterations);
    }

    #[test]
    fn fixed_parameter_stays_put() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let problem = line_problem(&xs, 2.0, 1.0).fix_at("b", 1.0).unwrap();
        let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
        assert_eq!(fit.params[1], 1.0);
        assert_eq!(fit.std_errors[1], 0.0);
        assert!((fit.params[0] - 2.0).abs() < 1e-10);
        assert_eq!(fit.dof, 9);
    }

    #[test]
    fn bounds_are_respected() {
        let xs: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let problem = line_problem(&xs, 2.0, 1.0)
            .with_initial(vec![0.5, 0.0])
            .unwrap()
            .with_bounds("a", Bounds::Range(0.0, 1.5))
            .unwrap();
        let fit = lm_fit(&problem, &LmOptions::default()).unwrap();
        assert!(fit.params[0] <= 1.5 && fit.params[0] > 1.4, "{:?}", fit);
        let bad = line_problem(&xs, 2.0, 1.0)
            .with_initial(vec![3.0, 0.0])
            .unwrap()
            .with_bounds("a", Bounds::Range(0.0, 1.5))
            .unwrap();
        assert!(matches!(
            lm_fit(&bad, &LmOptions::default()),
            Err(FitError::InitialOutOfBounds { .. })
        ));
    }

    #[test]
    fn problem_validation() {
        let problem = line_problem(&[1.0, 2.0], 1.0, 0.0);
        assert!(matches!(
            lm_fit(&problem, &LmOptions::default()),
            Err(FitError::TooFewPoints { points: 2, required: 3 })
        ));
        let flat: Vec<_> = (0..5).map(|i| DataPoint::new(i as f64, 3.0)).collect();
        let problem = FitProblem::new(&["a"], vec![1.0], |p: &[f64], _x: &f64| p[0], flat).unwrap();
        assert_eq!(lm_fit(&problem, &LmOptions::default()).unwrap_err(), FitError::ZeroVariance);
        let mixed = vec![
            DataPoint::with_sigma(0.0, 1.0, 0.1),
            DataPoint::new(1.0, 2.0),
            DataPoint::with_sigma(2.0, 3.0, 0.1),
        ];
        let problem = FitProblem::new(&["a"], vec![1.0], |p: &[f64], x: &f64| p[0] * x, mixed).unwrap();
        assert_eq!(
            lm_fit(&problem, &LmOptions::default()).unwrap_err(),
            FitError::InvalidSigma { index: 1 }
        );
        assert!(matches!(
            line_problem(&[1.0, 2.0, 3.0], 1.0, 0.0).fix("c"),
            Err(FitError::UnknownParameter { .. })
        ));
    }

    #[test]
    fn degenerate_parameter_is_named() {
        let data: Vec<_> = (0..6).map(|i| DataPoint::new(i as f64, 2.0 * i as f64 + 0.5)).collect();
        let problem = FitProblem::new(
            &["a", "ghost", "b"],
            vec![1.0, 1.0, 0.0],
            |p: &[f64], x: &f64| p[0] * x + p[2],
            data,
        )
        .unwrap();
        assert_eq!(
            lm_fit(&problem, &LmOptions::default()).unwrap_err(),
            FitError::Unidentifiable {
                parameter: "ghost".into()
            }
        );
    }

    #[test]
    fn max_iterations_returns_best_so_far() {
        let data: Vec<_> = (0..20)
            .map(|i| {
                let x = i as f64 * 0.25;
                DataPoint::new(x, 3.0 * (-0.7 * x).exp())
            })
            .collect();
        let problem =
            FitProblem::new(&["a", "k"], vec![1.0, 0.1], |p: &[f64], x: &f64| p[0] * (-p[1] * x).exp(), data)
                .unwrap();
        let opts = LmOptions {
            max_iterations: 1,
            ..LmOptions::default()
        };
        let fit = lm_fit(&problem, &opts).unwrap();
        assert!(!fit.converged);
        assert_eq!(fit.iterations, 1);
        let full = lm_fit(&problem, &LmOptions::default()).unwrap();
        assert!(full.converged);
        assert!((full.params[1] - 0.7).abs() < 1e-8);
    }

    #[test]
    fn propagation_examples() {
        let cov = DMatrix::from_diagonal(&DVector::from_vec(vec![0.04, 9.0]));
        let s = propagate_error(|p| p[0], &[1.0, 2.0], &cov).unwrap();
        assert!((s - 0.2).abs() < 1e-9);
        let s = propagate_error(|p| p[0] + p[1], &[1.0, 2.0], &DMatrix::identity(2, 2)).unwrap();
        assert!((s - 2f64.sqrt()).abs() < 1e-9);
        assert!(propagate_error(|p| p[0], &[1.0], &DMatrix::identity(2, 2)).is_err());
        assert!(propagate_error(|p| (p[0] - 1.0).sqrt(), &[1.0], &DMatrix::identity(1, 1)).is_err());
    }
}
