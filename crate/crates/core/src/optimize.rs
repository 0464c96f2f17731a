//! Efficiency figures of merit and their optimisation over interrogation
//! time, probe size and memory time.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blockstate::MeasurementSetting;
use crate::channel::NoiseParams;
use crate::energetics::{ledger_with_surcharge, EnergyLedger};
use crate::error::{domain, Error, Result};
use crate::metrology::{cfi, optimal_setting, qfi_small_r, DerivativeMode};
use crate::numeric::{linear_grid, log_grid};

/// Which Fisher information feeds the efficiencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum FisherMode {
    /// Frozen-R, ε closed form. Cheap; used for sweeps.
    #[default]
    SmallR,
    /// Readout CFI with the full ω-dependence.
    Exact,
}

impl FisherMode {
    /// CFI of the readout at `setting` in this mode.
    pub fn cfi(self, params: &NoiseParams, n: usize, t: f64, setting: &MeasurementSetting) -> Result<f64> {
        let mode = match self {
            FisherMode::SmallR => DerivativeMode::FrozenRatioBias,
            FisherMode::Exact => DerivativeMode::FiniteDifference,
        };
        cfi(params, n, t, setting, mode)
    }

    /// Fisher information at the parity-rule setting with `ω̄ = ω`.
    pub fn fisher(self, params: &NoiseParams, n: usize, t: f64) -> Result<f64> {
        match self {
            FisherMode::SmallR => qfi_small_r(params, n, t),
            FisherMode::Exact => self.cfi(params, n, t, &optimal_setting(n, params.omega(), t)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// Fisher information per unit interrogation time.
    Time,
    /// Fisher information per unit energy spent in a round.
    Energy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EfficiencyPoint {
    pub n: usize,
    pub t: f64,
    pub fisher: f64,
    pub fisher_mode: FisherMode,
    pub eta_time: f64,
    pub eta_energy: f64,
    pub ledger: EnergyLedger,
}

fn energy_ratio(fisher: f64, ledger: &EnergyLedger) -> Result<f64> {
    if !(ledger.cost_per_round > 0.0) {
        return Err(Error::UndefinedEfficiency(format!(
            "cost per round is {} (no polarization to spend)",
            ledger.cost_per_round
        )));
    }
    Ok(fisher / ledger.cost_per_round)
}

/// `F / (E_init + E_meas)` at the parity-rule setting.
pub fn eta_energy(params: &NoiseParams, n: usize, t: f64, mode: FisherMode) -> Result<f64> {
    eta_energy_with_surcharge(params, n, t, mode, 0.0)
}

pub fn eta_energy_with_surcharge(params: &NoiseParams, n: usize, t: f64, mode: FisherMode, surcharge: f64) -> Result<f64> {
    let setting = optimal_setting(n, params.omega(), t);
    let fisher = mode.fisher(params, n, t)?;
    energy_ratio(fisher, &ledger_with_surcharge(params, n, t, &setting, surcharge)?)
}

/// `F / t` at the parity-rule setting.
pub fn eta_time(params: &NoiseParams, n: usize, t: f64, mode: FisherMode) -> Result<f64> {
    Ok(mode.fisher(params, n, t)? / t)
}

pub fn efficiency_point(params: &NoiseParams, n: usize, t: f64, mode: FisherMode, surcharge: f64) -> Result<EfficiencyPoint> {
    let setting = optimal_setting(n, params.omega(), t);
    let fisher = mode.fisher(params, n, t)?;
    let ledger = ledger_with_surcharge(params, n, t, &setting, surcharge)?;
    Ok(EfficiencyPoint {
        n,
        t,
        fisher,
        fisher_mode: mode,
        eta_time: fisher / t,
        eta_energy: energy_ratio(fisher, &ledger)?,
        ledger,
    })
}

/// Efficiency at an arbitrary readout setting.
pub fn efficiency_at(
    params: &NoiseParams,
    n: usize,
    t: f64,
    setting: &MeasurementSetting,
    objective: Objective,
    mode: FisherMode,
    surcharge: f64,
) -> Result<f64> {
    let fisher = mode.cfi(params, n, t, setting)?;
    match objective {
        Objective::Time => Ok(fisher / t),
        Objective::Energy => energy_ratio(fisher, &ledger_with_surcharge(params, n, t, setting, surcharge)?),
    }
}

/// Search policy for the optimal interrogation time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimeSearch {
    /// Upper end of the search range; `20/(λR·max(1, n))` when absent.
    pub t_max: Option<f64>,
    pub grid_points: usize,
    /// Lower end of the grid relative to `t_max`.
    pub t_min_fraction: f64,
    pub rel_tol: f64,
    pub max_iterations: usize,
    pub surcharge: f64,
}

impl Default for TimeSearch {
    fn default() -> Self {
        Self { t_max: None, grid_points: 200, t_min_fraction: 1e-6, rel_tol: 1e-8, max_iterations: 500, surcharge: 0.0 }
    }
}

/// Maxima within this relative distance of the best grid value count as ties.
const TIE_TOLERANCE: f64 = 1e-10;

impl TimeSearch {
    pub fn upper_limit(&self, params: &NoiseParams, n: usize) -> Result<f64> {
        if let Some(t) = self.t_max {
            if !(t > 0.0 && t.is_finite()) {
                return domain(format!("t_max must be positive and finite, got {t}"));
            }
            return Ok(t);
        }
        let rate = params.lambda() * params.ratio();
        if !(rate > 0.0) {
            return domain("no dissipation: the default search range is unbounded, set t_max");
        }
        Ok(20.0 / (rate * n.max(1) as f64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalTime {
    pub t_star: f64,
    pub objective: Objective,
    pub value: f64,
    /// Grid neighbours of the best grid point, refined in between.
    pub bracket: (f64, f64),
    pub converged: bool,
    pub iterations: usize,
}

/// Global maximum of a scalar function on `[lo, hi]`: log grid, then
/// golden-section refinement between the neighbours of the best node.
pub fn maximize_on_log_grid<F>(f: F, lo: f64, hi: f64, search: &TimeSearch) -> Result<(f64, f64, (f64, f64), usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let grid = log_grid(lo, hi, search.grid_points.max(3));
    let values = grid.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
    refine_best(&f, &grid, &values, search.rel_tol, search.max_iterations)
}

fn refine_best<F>(f: &F, grid: &[f64], values: &[f64], rel_tol: f64, max_iterations: usize) -> Result<(f64, f64, (f64, f64), usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !best.is_finite() {
        return domain("objective is not finite on the search grid");
    }
    let threshold = best - TIE_TOLERANCE * best.abs();
    let i = values.iter().position(|&v| v >= threshold).unwrap_or(0);
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    let (t, v, iterations) = golden_section(f, lo, hi, Tolerance::Relative(rel_tol), max_iterations)?;
    Ok(if v >= values[i] { (t, v, (lo, hi), iterations) } else { (grid[i], values[i], (lo, hi), iterations) })
}

/// Stopping width for golden-section refinement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tolerance {
    /// Width below this fraction of the bracket midpoint.
    Relative(f64),
    Absolute(f64),
}

impl Tolerance {
    fn met(self, a: f64, b: f64) -> bool {
        let width = (b - a).abs();
        match self {
            Tolerance::Relative(r) => width <= r * (0.5 * (a + b)).abs(),
            Tolerance::Absolute(w) => width <= w,
        }
    }
}

/// Golden-section maximisation on `[lo, hi]`.
pub fn golden_section<F>(f: &F, lo: f64, hi: f64, tol: Tolerance, max_iterations: usize) -> Result<(f64, f64, usize)>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for it in 0..max_iterations {
        if tol.met(a, b) {
            let (t, v) = if fc >= fd { (c, fc) } else { (d, fd) };
            return Ok((t, v, it));
        }
        // ties keep the smaller t
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Err(Error::NonConvergence { lo: a, hi: b, iterations: max_iterations })
}

pub fn optimal_time(params: &NoiseParams, n: usize, objective: Objective, mode: FisherMode) -> Result<OptimalTime> {
    optimal_time_with(params, n, objective, mode, &TimeSearch::default())
}

pub fn optimal_time_with(
    params: &NoiseParams,
    n: usize,
    objective: Objective,
    mode: FisherMode,
    search: &TimeSearch,
) -> Result<OptimalTime> {
    if n == 0 {
        return domain("probe size must be at least 1");
    }
    let t_max = search.upper_limit(params, n)?;
    let f = |t: f64| match objective {
        Objective::Time => eta_time(params, n, t, mode),
        Objective::Energy => eta_energy_with_surcharge(params, n, t, mode, search.surcharge),
    };
    let (t_star, value, bracket, iterations) = maximize_on_log_grid(f, t_max * search.t_min_fraction, t_max, search)?;
    Ok(OptimalTime { t_star, objective, value, bracket, converged: true, iterations })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RoundsBound {
    pub rounds: u64,
    /// `1/√(M F)`
    pub delta_omega: f64,
}

/// Rounds affordable with `budget` and the resulting Cramér–Rao bound.
pub fn rounds_and_bound(budget: f64, ledger: &EnergyLedger, fisher: f64) -> Result<RoundsBound> {
    if !(budget > 0.0 && budget.is_finite()) {
        return domain(format!("energy budget must be positive, got {budget}"));
    }
    let cost = ledger.cost_per_round;
    if !(cost > 0.0) {
        return Err(Error::UndefinedEfficiency(format!("cost per round is {cost}")));
    }
    if !(fisher > 0.0) {
        return domain(format!("Fisher information must be positive, got {fisher}"));
    }
    let rounds = (budget / cost).floor();
    if rounds < 1.0 {
        return Err(Error::InsufficientBudget { budget, cost });
    }
    Ok(RoundsBound { rounds: rounds as u64, delta_omega: 1.0 / (rounds * fisher).sqrt() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingFit {
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_range: (f64, f64),
}

/// Least-squares line through `(ln n, ln value)`.
pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return domain(format!("need at least 3 points for a fit, got {}", points.len()));
    }
    if let Some(&(n, v)) = points.iter().find(|&&(n, v)| !(n > 0.0 && v > 0.0 && n.is_finite() && v.is_finite())) {
        return domain(format!("log-log fit needs positive finite data, got ({n}, {v})"));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return domain("all sizes coincide");
    }
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let ss_res: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - exponent * x).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { (1.0 - ss_res / syy).clamp(0.0, 1.0) };
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingFit { exponent, intercept, r_squared, n_range: (lo, hi) })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JointOptimum {
    pub t: f64,
    pub setting: MeasurementSetting,
    pub value: f64,
    pub sweeps: usize,
}

const JOINT_SWEEPS: usize = 3;
const ANGLE_POINTS: usize = 721;

/// Coordinate ascent over `(t, ζ1, ζ2)`, starting from the parity rule at
/// the optimal time.
pub fn joint_optimum(
    params: &NoiseParams,
    n: usize,
    objective: Objective,
    mode: FisherMode,
    search: &TimeSearch,
) -> Result<JointOptimum> {
    let start = optimal_time_with(params, n, objective, mode, search)?;
    let mut t = start.t_star;
    let mut setting = optimal_setting(n, params.omega(), t);
    let eval = |t: f64, s: &MeasurementSetting| efficiency_at(params, n, t, s, objective, mode, search.surcharge);
    let mut value = eval(t, &setting)?;
    let t_max = search.upper_limit(params, n)?;
    let pi = std::f64::consts::PI;
    let angles = linear_grid(-pi, pi, ANGLE_POINTS);
    for _ in 0..JOINT_SWEEPS {
        let s = setting;
        let (tt, v, _, _) = maximize_on_log_grid(|t| eval(t, &s), t_max * search.t_min_fraction, t_max, search)?;
        if v > value {
            t = tt;
            value = v;
        }
        for which in 0..2 {
            let with = |z: f64| {
                let mut s = setting;
                if which == 0 {
                    s.zeta1 = z;
                } else {
                    s.zeta2 = z;
                }
                s
            };
            let f = |z: f64| eval(t, &with(z));
            let values = angles.iter().map(|&z| f(z)).collect::<Result<Vec<_>>>()?;
            let best = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let i = values.iter().position(|&v| v >= best - TIE_TOLERANCE * best.abs()).unwrap_or(0);
            let lo = angles[i.saturating_sub(1)];
            let hi = angles[(i + 1).min(angles.len() - 1)];
            let (z, v, _) = golden_section(&f, lo, hi, Tolerance::Absolute(search.rel_tol), search.max_iterations)?;
            let (z, v) = if v >= values[i] { (z, v) } else { (angles[i], values[i]) };
            if v > value {
                setting = with(z);
                value = v;
            }
        }
    }
    Ok(JointOptimum { t, setting, value, sweeps: JOINT_SWEEPS })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SizeRow {
    pub n: usize,
    pub t_star_time: f64,
    pub eta_time: f64,
    pub t_star_energy: f64,
    pub eta_energy: f64,
    /// Ledger and Fisher entries are taken at `t_star_energy`.
    pub e_init: f64,
    pub e_meas: f64,
    pub fisher: f64,
}

pub fn size_row(params: &NoiseParams, n: usize, mode: FisherMode, search: &TimeSearch) -> Result<SizeRow> {
    let time = optimal_time_with(params, n, Objective::Time, mode, search)?;
    let energy = optimal_time_with(params, n, Objective::Energy, mode, search)?;
    let point = efficiency_point(params, n, energy.t_star, mode, search.surcharge)?;
    Ok(SizeRow {
        n,
        t_star_time: time.t_star,
        eta_time: time.value,
        t_star_energy: energy.t_star,
        eta_energy: energy.value,
        e_init: point.ledger.e_init,
        e_meas: point.ledger.e_meas,
        fisher: point.fisher,
    })
}

/// Optimal times and efficiencies for every size, evaluated in parallel and
/// returned in input order.
pub fn scan_size(params: &NoiseParams, sizes: &[usize], mode: FisherMode, search: &TimeSearch) -> Result<Vec<SizeRow>> {
    sizes.par_iter().map(|&n| size_row(params, n, mode, search)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaRow {
    pub lambda: f64,
    pub t_star: f64,
    pub eta_energy: f64,
}

pub fn scan_lambda(
    params: &NoiseParams,
    lambdas: &[f64],
    n: usize,
    mode: FisherMode,
    search: &TimeSearch,
) -> Result<Vec<LambdaRow>> {
    lambdas
        .par_iter()
        .map(|&lambda| {
            let p = params.with_lambda(lambda)?;
            let opt = optimal_time_with(&p, n, Objective::Energy, mode, search)?;
            Ok(LambdaRow { lambda, t_star: opt.t_star, eta_energy: opt.value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::channel_at;

    #[test]
    fn unpolarized_probe_has_no_energy_efficiency() {
        let p = NoiseParams::new(1.0, f64::INFINITY, 0.0, 5.0).unwrap();
        assert!(matches!(eta_energy(&p, 3, 1.0, FisherMode::SmallR), Err(Error::UndefinedEfficiency(_))));
        assert_eq!(eta_time(&p, 3, 1.0, FisherMode::SmallR).unwrap(), 0.0);
    }

    #[test]
    fn energy_efficiency_recomposes() {
        let p = NoiseParams::reference();
        let t = 2.0;
        let eta = eta_energy(&p, 2, t, FisherMode::SmallR).unwrap();
        let l = crate::energetics::ledger(&p, 2, t, &optimal_setting(2, 1.0, t)).unwrap();
        let q = qfi_small_r(&p, 2, t).unwrap();
        assert!(eta.is_finite() && eta > 0.0);
        assert!((eta - q / (l.e_init + l.e_meas)).abs() <= 1e-14 * eta);
        let point = efficiency_point(&p, 2, t, FisherMode::SmallR, 0.0).unwrap();
        assert_eq!(point.eta_energy, eta);
        assert_eq!(point.eta_time, q / t);
    }

    #[test]
    fn single_atom_time_optimum_matches_dense_scan() {
        let p = NoiseParams::reference();
        let opt = optimal_time(&p, 1, Objective::Time, FisherMode::SmallR).unwrap();
        let eps2 = p.epsilon().powi(2);
        let g = |t: f64| t * channel_at(&p, t).unwrap().eta_perp.powi(2) * eps2;
        let t_max = 20.0 / (p.lambda() * p.ratio());
        let (mut bt, mut bv) = (0.0, f64::NEG_INFINITY);
        let points = 1_000_000;
        for k in 1..=points {
            let t = t_max * k as f64 / points as f64;
            let v = g(t);
            if v > bv {
                bt = t;
                bv = v;
            }
        }
        assert!(opt.t_star > 0.0);
        assert!((opt.value - bv).abs() <= 1e-6 * bv);
        assert!((opt.t_star - bt).abs() <= t_max / points as f64);
        // stationarity of t·η⊥²
        let h = 1e-4 * opt.t_star;
        let slope = (g(opt.t_star + h) - g(opt.t_star - h)) / (2.0 * h);
        assert!(slope.abs() * opt.t_star <= 1e-6 * opt.value);
    }

    #[test]
    fn optimum_is_locally_maximal() {
        let p = NoiseParams::reference();
        for n in [2, 5, 17, 60] {
            for objective in [Objective::Time, Objective::Energy] {
                let opt = optimal_time(&p, n, objective, FisherMode::SmallR).unwrap();
                let f = |t: f64| match objective {
                    Objective::Time => eta_time(&p, n, t, FisherMode::SmallR).unwrap(),
                    Objective::Energy => eta_energy(&p, n, t, FisherMode::SmallR).unwrap(),
                };
                assert!(opt.value >= f(0.9 * opt.t_star) && opt.value >= f(1.1 * opt.t_star));
                assert!(opt.value >= f(opt.bracket.0) && opt.value >= f(opt.bracket.1));
                assert!(opt.converged);
            }
        }
    }

    #[test]
    fn optimum_is_reproducible() {
        let p = NoiseParams::reference();
        let a = optimal_time(&p, 12, Objective::Energy, FisherMode::SmallR).unwrap();
        let b = optimal_time(&p, 12, Objective::Energy, FisherMode::SmallR).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn optimal_time_is_dimensionally_consistent() {
        let base = NoiseParams::new(1.0, 2.0, 0.01, 5.0).unwrap();
        let s = 3.0;
        let scaled = NoiseParams::new(s, 2.0 * s, 0.01 * s, 5.0 * s).unwrap();
        for objective in [Objective::Time, Objective::Energy] {
            let a = optimal_time(&base, 6, objective, FisherMode::SmallR).unwrap();
            let b = optimal_time(&scaled, 6, objective, FisherMode::SmallR).unwrap();
            assert!((a.t_star - s * b.t_star).abs() <= 1e-6 * a.t_star);
        }
    }

    #[test]
    fn unbounded_search_needs_explicit_range() {
        let p = NoiseParams::new(1.0, 2.0, 0.0, 5.0).unwrap();
        assert!(optimal_time(&p, 3, Objective::Time, FisherMode::SmallR).is_err());
        let search = TimeSearch { t_max: Some(10.0), ..TimeSearch::default() };
        // without dissipation F/t grows linearly so the optimum sits at t_max
        let opt = optimal_time_with(&p, 3, Objective::Time, FisherMode::SmallR, &search).unwrap();
        assert!((opt.t_star - 10.0).abs() < 1e-6);
    }

    #[test]
    fn golden_section_reports_non_convergence() {
        let f = |t: f64| Ok(-(t - 1.0).powi(2));
        let (t, _, _) = golden_section(&f, 0.0, 3.0, Tolerance::Relative(1e-10), 500).unwrap();
        assert!((t - 1.0).abs() < 1e-8);
        let (t, _, _) = golden_section(&|z: f64| Ok(-z * z), -1.0, 0.5, Tolerance::Absolute(1e-9), 500).unwrap();
        assert!(t.abs() < 1e-9);
        let short = golden_section(&f, 0.0, 3.0, Tolerance::Relative(1e-10), 5);
        assert!(matches!(short, Err(Error::NonConvergence { iterations: 5, .. })));
    }

    #[test]
    fn rounds_examples() {
        let ledger = EnergyLedger { e_init: 0.01, e_rho4: -0.001, e_rho6: 0.0015, e_meas: 0.0025, surcharge: 0.0, cost_per_round: 0.0125 };
        let r = rounds_and_bound(100.0, &ledger, 2.0).unwrap();
        assert_eq!(r.rounds, 8000);
        assert!((r.delta_omega - 1.0 / 16000f64.sqrt()).abs() < 1e-15);
        let r4 = rounds_and_bound(100.0, &ledger, 8.0).unwrap();
        assert!((r4.delta_omega - 0.5 * r.delta_omega).abs() < 1e-16);
        assert!(matches!(rounds_and_bound(0.01, &ledger, 2.0), Err(Error::InsufficientBudget { .. })));
        assert!(rounds_and_bound(-1.0, &ledger, 2.0).is_err());
        assert!(rounds_and_bound(1.0, &ledger, 0.0).is_err());
    }

    #[test]
    fn exact_power_law_fit() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|n| (n as f64, 7.0 * (n as f64).powi(3))).collect();
        let fit = scaling_fit(&pts).unwrap();
        assert!((fit.exponent - 3.0).abs() < 1e-10);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-10);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.n_range, (1.0, 10.0));
        assert!(scaling_fit(&pts[..2]).is_err());
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, -1.0), (3.0, 1.0)]).is_err());
    }

    #[test]
    fn joint_ascent_never_loses_to_parity_rule() {
        let p = NoiseParams::new(1.0, 2.0, 0.02, 1.0).unwrap();
        let search = TimeSearch { grid_points: 60, ..TimeSearch::default() };
        for n in [2, 3] {
            let base = optimal_time_with(&p, n, Objective::Energy, FisherMode::SmallR, &search).unwrap();
            let joint = joint_optimum(&p, n, Objective::Energy, FisherMode::SmallR, &search).unwrap();
            assert!(joint.value >= base.value * (1.0 - 1e-12));
        }
    }

    #[test]
    fn scans_preserve_order() {
        let p = NoiseParams::reference();
        let sizes = [7, 2, 30, 4];
        let rows = scan_size(&p, &sizes, FisherMode::SmallR, &TimeSearch::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.n).collect::<Vec<_>>(), sizes);
        let lambdas = [3.0, 1.0, 20.0];
        let rows = scan_lambda(&p, &lambdas, 2, FisherMode::SmallR, &TimeSearch::default()).unwrap();
        assert_eq!(rows.iter().map(|r| r.lambda).collect::<Vec<_>>(), lambdas);
    }
}
