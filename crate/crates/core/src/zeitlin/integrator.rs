//! Lie-Poisson splitting integrator for the sine-bracket truncation.
//!
//! `H` is split into pair Hamiltonians `H_k = ω_k ω_{−k} / |k|_κ²`. Under
//! the flow of `H_k` the pair `ω_{±k}` is frozen and every other mode moves
//! along its cycle `j, j+k, j+2k, …` (mod `2N+1`) as
//!
//! ```text
//! ẋ_m = s (ψ x_{m+1} − ψ̄ x_{m−1}),   ψ = ω_{−k}/|k|_κ²,   s = κ sin(ε j×k)/ε,
//! ```
//!
//! a circulant system diagonalised by the DFT along the cycle with
//! eigenvalues `2i s Im(ψ ζ^r)`, `ζ = e^{2πi/L}`. Each partial flow is thus
//! exact, and so is conservation of every Casimir.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{weighted_norm_sq, ModeIndex};
use crate::scalar::{int, lit, Real};
use crate::zeitlin::casimir::ClockShift;
use crate::zeitlin::truncation::{hamiltonian, structure_constant, TruncatedState, TruncationSpec};

/// Precomputed exact flow of one pair Hamiltonian.
struct PairFlow<T> {
    k: ModeIndex,
    minus_k: usize,
    weight: T,
    len: usize,
    /// Storage slots of the moving cycles, `len` per cycle.
    slots: Vec<usize>,
    /// `s` per moving cycle.
    coupling: Vec<T>,
    /// `ζ^r`, `r = 0..len`.
    roots: Vec<Complex<T>>,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> PairFlow<T> {
    fn new(k: ModeIndex, trunc: &TruncationSpec<T>, planner: &mut FftPlanner<T>) -> Self {
        let mut seen = vec![false; trunc.len()];
        let mut slots = Vec::new();
        let mut coupling = Vec::new();
        let mut len = 0;
        for j in trunc.modes() {
            if seen[trunc.index(j)] {
                continue;
            }
            let s = structure_constant(j, k, trunc);
            let mut cycle = Vec::new();
            let mut x = j;
            loop {
                let i = trunc.index(x);
                seen[i] = true;
                cycle.push(i);
                x = trunc.wrap(x + k);
                if x == j {
                    break;
                }
            }
            if s == T::zero() {
                continue;
            }
            debug_assert!(len == 0 || len == cycle.len());
            len = cycle.len();
            slots.extend(cycle);
            coupling.push(s);
        }
        let len = len.max(1);
        let roots = (0..len)
            .map(|r| Complex::from_polar(T::one(), T::TAU() * int::<T>(r as i64) / int::<T>(len as i64)))
            .collect();
        PairFlow {
            k,
            minus_k: trunc.index(-k),
            weight: weighted_norm_sq(k, trunc.kappa).recip(),
            len,
            slots,
            coupling,
            roots,
            forward: planner.plan_fft_forward(len),
            inverse: planner.plan_fft_inverse(len),
        }
    }

    fn apply(&self, omega: &mut [Complex<T>], t: T, work: &mut Workspace<T>) {
        if self.coupling.is_empty() {
            return;
        }
        let psi = omega[self.minus_k] * self.weight;
        let two_t = t + t;
        work.theta.clear();
        work.theta.extend(self.roots.iter().map(|z| two_t * (psi * *z).im));
        let buf = &mut work.buffer;
        buf.clear();
        buf.extend(self.slots.iter().map(|&i| omega[i]));
        let need = self.forward.get_inplace_scratch_len().max(self.inverse.get_inplace_scratch_len());
        if work.scratch.len() < need {
            work.scratch.resize(need, Complex::new(T::zero(), T::zero()));
        }
        self.forward.process_with_scratch(buf, &mut work.scratch[..need]);
        for (chunk, &s) in buf.chunks_exact_mut(self.len).zip(&self.coupling) {
            for (z, &th) in chunk.iter_mut().zip(&work.theta) {
                *z = *z * Complex::from_polar(T::one(), s * th);
            }
        }
        self.inverse.process_with_scratch(buf, &mut work.scratch[..need]);
        let inv_len = int::<T>(self.len as i64).recip();
        for (&i, z) in self.slots.iter().zip(buf.iter()) {
            omega[i] = *z * inv_len;
        }
    }
}

struct Workspace<T> {
    buffer: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
    theta: Vec<T>,
}

impl<T: Real> Workspace<T> {
    fn new() -> Self {
        Workspace {
            buffer: Vec::new(),
            scratch: Vec::new(),
            theta: Vec::new(),
        }
    }
}

/// Strang composition `A₁(τ/2)…A_{P−1}(τ/2) A_P(τ) A_{P−1}(τ/2)…A₁(τ/2)` of
/// the exact pair flows, pairs ordered by `|k|_κ` ascending. Immutable once
/// built; share it across trajectories.
pub struct LiePoissonIntegrator<T> {
    pub trunc: TruncationSpec<T>,
    flows: Vec<PairFlow<T>>,
}

impl<T: Real> LiePoissonIntegrator<T> {
    pub fn new(trunc: &TruncationSpec<T>) -> Self {
        let mut reps: Vec<ModeIndex> = trunc.pair_representatives().collect();
        reps.sort_by(|a, b| {
            weighted_norm_sq(*a, trunc.kappa)
                .partial_cmp(&weighted_norm_sq(*b, trunc.kappa))
                .unwrap_or(std::cmp::Ordering::Equal)
                .then((a.k1, a.k2).cmp(&(b.k1, b.k2)))
        });
        let mut planner = FftPlanner::new();
        let flows = reps.into_iter().map(|k| PairFlow::new(k, trunc, &mut planner)).collect();
        LiePoissonIntegrator { trunc: *trunc, flows }
    }

    /// Pair representatives in splitting order.
    pub fn pair_order(&self) -> Vec<ModeIndex> {
        self.flows.iter().map(|f| f.k).collect()
    }

    fn flow_index(&self, k: ModeIndex) -> Option<usize> {
        let k = self.trunc.wrap(k);
        self.flows.iter().position(|f| f.k == k || f.k == -k)
    }

    /// Exact flow of `H_k` for time `t` (any sign).
    pub fn pair_flow(&self, state: &TruncatedState<T>, k: ModeIndex, t: T) -> Result<TruncatedState<T>> {
        let i = self.flow_index(k).ok_or(Error::ModeOutsideLattice(k))?;
        let mut out = state.clone();
        self.flows[i].apply(&mut out.omega, t, &mut Workspace::new());
        Ok(out)
    }

    /// Advances `state` in place by one step of size `dt`.
    pub fn step_in_place(&self, state: &mut TruncatedState<T>, dt: T) -> Result<()> {
        if !(dt > T::zero()) || !dt.is_finite() {
            return Err(Error::NonPositiveStep(dt.to_f64().unwrap_or(f64::NAN)));
        }
        let mut work = Workspace::new();
        let half = dt * lit::<T>(0.5);
        let (last, rest) = self.flows.split_last().expect("N ≥ 1 gives at least one pair");
        for f in rest {
            f.apply(&mut state.omega, half, &mut work);
        }
        last.apply(&mut state.omega, dt, &mut work);
        for f in rest.iter().rev() {
            f.apply(&mut state.omega, half, &mut work);
        }
        state.enforce_reality(&self.trunc);
        state.time += dt;
        Ok(())
    }

    pub fn step(&self, state: &TruncatedState<T>, dt: T) -> Result<TruncatedState<T>> {
        let mut out = state.clone();
        self.step_in_place(&mut out, dt)?;
        Ok(out)
    }
}

/// One splitting step; builds the pair flows on each call, so prefer
/// [`LiePoissonIntegrator`] for repeated stepping.
pub fn lie_poisson_step<T: Real>(
    state: &TruncatedState<T>,
    dt: T,
    trunc: &TruncationSpec<T>,
) -> Result<TruncatedState<T>> {
    LiePoissonIntegrator::new(trunc).step(state, dt)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationRecord<T> {
    pub step: usize,
    pub time: T,
    pub hamiltonian: T,
    /// `C₂, C₃, …`
    pub casimirs: Vec<T>,
    /// `|H − H(0)| / |H(0)|`.
    pub hamiltonian_drift: T,
    /// `|C_n − C_n(0)| / max(|C_n(0)|, C₂(0)^{n/2})`.
    pub casimir_drift: Vec<T>,
    /// Distance to the reference state, when one was given.
    pub deviation: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConservationLog<T> {
    pub records: Vec<ConservationRecord<T>>,
}

impl<T: Real> ConservationLog<T> {
    pub fn max_hamiltonian_drift(&self) -> T {
        self.records.iter().fold(T::zero(), |m, r| m.max(r.hamiltonian_drift))
    }

    /// Largest drift of each logged Casimir, starting with `C₂`.
    pub fn max_casimir_drift(&self) -> Vec<T> {
        let n = self.records.first().map_or(0, |r| r.casimir_drift.len());
        (0..n)
            .map(|i| self.records.iter().fold(T::zero(), |m, r| m.max(r.casimir_drift[i])))
            .collect()
    }

    /// `(time, deviation)` samples.
    pub fn deviations(&self) -> Vec<(T, T)> {
        self.records.iter().filter_map(|r| r.deviation.map(|d| (r.time, d))).collect()
    }
}

#[derive(Debug, Clone)]
pub struct SimulationOptions<T> {
    /// Keep a snapshot every this many steps (0: initial and final only).
    pub snapshot_every: usize,
    /// Log conservation data every this many steps (at least 1).
    pub log_every: usize,
    /// Highest Casimir order logged.
    pub max_casimir: usize,
    /// State the deviation is measured against, typically the equilibrium.
    pub reference: Option<TruncatedState<T>>,
}

impl<T> Default for SimulationOptions<T> {
    fn default() -> Self {
        SimulationOptions {
            snapshot_every: 0,
            log_every: 1,
            max_casimir: 5,
            reference: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory<T> {
    pub snapshots: Vec<TruncatedState<T>>,
    pub log: ConservationLog<T>,
    pub steps: usize,
}

impl<T: Real> Trajectory<T> {
    pub fn final_state(&self) -> &TruncatedState<T> {
        self.snapshots.last().expect("trajectory holds at least the initial state")
    }
}

/// Integrates from `initial.time` to `initial.time + t_end`. The last step
/// is shortened if `dt` does not divide `t_end`.
pub fn simulate<T: Real>(
    initial: &TruncatedState<T>,
    t_end: T,
    dt: T,
    integrator: &LiePoissonIntegrator<T>,
    options: &SimulationOptions<T>,
) -> Result<Trajectory<T>> {
    let trunc = &integrator.trunc;
    if !(dt > T::zero()) || !dt.is_finite() {
        return Err(Error::NonPositiveStep(dt.to_f64().unwrap_or(f64::NAN)));
    }
    if !(t_end >= T::zero()) || !t_end.is_finite() {
        return Err(Error::InvalidParameter(format!("end time must be nonnegative, got {t_end}")));
    }
    if initial.n != trunc.n {
        return Err(Error::InvalidParameter(format!(
            "state has N = {} but the integrator has N = {}",
            initial.n, trunc.n
        )));
    }
    let max_casimir = options.max_casimir.clamp(2, trunc.modulus() as usize);
    let rep = ClockShift::new(trunc)?;
    let log_every = options.log_every.max(1);

    let h0 = hamiltonian(initial, trunc);
    let c0 = rep.casimirs(initial, max_casimir)?;
    let c_scale: Vec<T> = c0
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = int::<T>(i as i64 + 2);
            let s = c.abs().max(c0[0].abs().powf(n / lit::<T>(2.0)));
            if s > T::zero() {
                s
            } else {
                T::one()
            }
        })
        .collect();
    let h_scale = if h0 > T::zero() { h0 } else { T::one() };
    let record = |step: usize, state: &TruncatedState<T>| -> Result<ConservationRecord<T>> {
        let h = hamiltonian(state, trunc);
        let c = rep.casimirs(state, max_casimir)?;
        let casimir_drift = c.iter().zip(&c0).zip(&c_scale).map(|((a, b), s)| (*a - *b).abs() / *s).collect();
        Ok(ConservationRecord {
            step,
            time: state.time,
            hamiltonian: h,
            hamiltonian_drift: (h - h0).abs() / h_scale,
            casimirs: c,
            casimir_drift,
            deviation: options.reference.as_ref().map(|r| state.distance(r)),
        })
    };

    let ratio = (t_end / dt).to_f64().unwrap_or(0.0);
    let steps = if t_end == T::zero() {
        0
    } else {
        (ratio - 1e-9).ceil().max(1.0) as usize
    };
    let t_start = initial.time;
    let mut state = initial.clone();
    let mut snapshots = vec![state.clone()];
    let mut records = vec![record(0, &state)?];
    for step in 1..=steps {
        let remaining = t_start + t_end - state.time;
        let h = if step == steps { remaining } else { dt.min(remaining) };
        if h > T::zero() {
            integrator.step_in_place(&mut state, h)?;
        }
        if step == steps {
            state.time = t_start + t_end;
        }
        if step % log_every == 0 || step == steps {
            records.push(record(step, &state)?);
        }
        let snap = options.snapshot_every > 0 && step % options.snapshot_every == 0;
        if snap || step == steps {
            snapshots.push(state.clone());
        }
    }
    Ok(Trajectory {
        snapshots,
        log: ConservationLog { records },
        steps,
    })
}

/// Least-squares fit of `ln y = rate·t + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthFit<T> {
    pub rate: T,
    pub intercept: T,
    pub points: usize,
    pub t_start: T,
    pub t_end: T,
}

/// Fits the exponential rate over the first stretch of samples with
/// `lower ≤ y ≤ upper`, from the first sample reaching `lower` up to the
/// first one exceeding `upper`. `None` with fewer than 3 samples.
pub fn fit_growth_rate<T: Real>(samples: &[(T, T)], lower: T, upper: T) -> Option<GrowthFit<T>> {
    let start = samples.iter().position(|&(_, y)| y >= lower)?;
    let pts: Vec<(T, T)> = samples[start..]
        .iter()
        .take_while(|&&(_, y)| y <= upper)
        .filter(|&&(_, y)| y > T::zero())
        .map(|&(t, y)| (t, y.ln()))
        .collect();
    if pts.len() < 3 {
        return None;
    }
    let n = int::<T>(pts.len() as i64);
    let mt = pts.iter().map(|p| p.0).sum::<T>() / n;
    let my = pts.iter().map(|p| p.1).sum::<T>() / n;
    let sxy: T = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let sxx: T = pts.iter().map(|p| (p.0 - mt) * (p.0 - mt)).sum();
    if sxx == T::zero() {
        return None;
    }
    let rate = sxy / sxx;
    Some(GrowthFit {
        rate,
        intercept: my - rate * mt,
        points: pts.len(),
        t_start: pts[0].0,
        t_end: pts[pts.len() - 1].0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::DomainSpec;
    use crate::zeitlin::truncation::pair_vector_field;

    #[test]
    fn pair_flow_derivative_matches_pair_field() {
        let t = TruncationSpec::<f64>::new(3, 1.3).unwrap();
        let integ = LiePoissonIntegrator::new(&t);
        let s = TruncatedState::random(&t, 1.0, 8);
        let h = 1e-5;
        for k in integ.pair_order() {
            let plus = integ.pair_flow(&s, k, h).unwrap();
            let minus = integ.pair_flow(&s, k, -h).unwrap();
            let fd = plus.add(&minus.scaled(-1.0)).scaled(0.5 / h);
            let exact = pair_vector_field(&s, k, &t);
            assert!(fd.distance(&exact) < 1e-8 * exact.norm().max(1.0), "{k}");
        }
    }

    #[test]
    fn order_is_by_weighted_norm() {
        let t = TruncationSpec::<f64>::new(2, 2.0).unwrap();
        let order = LiePoissonIntegrator::new(&t).pair_order();
        assert_eq!(order[0], ModeIndex::new(1, 0));
        let norms: Vec<f64> = order.iter().map(|k| weighted_norm_sq(*k, 2.0)).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn equilibrium_is_fixed() {
        let t = TruncationSpec::<f64>::new(5, 1.0).unwrap();
        let spec = DomainSpec::new(1.0, ModeIndex::new(2, 1), 1.0).unwrap();
        let eq = TruncatedState::equilibrium(&spec, &t).unwrap();
        let integ = LiePoissonIntegrator::new(&t);
        let mut s = eq.clone();
        for _ in 0..20 {
            integ.step_in_place(&mut s, 0.1).unwrap();
        }
        assert!(s.distance(&eq) < 1e-13);
        assert!(integ.step(&eq, 0.0).is_err());
        assert!(integ.step(&eq, -1.0).is_err());
    }

    #[test]
    fn zero_time_gives_initial_state_only() {
        let t = TruncationSpec::<f64>::new(3, 1.0).unwrap();
        let integ = LiePoissonIntegrator::new(&t);
        let s = TruncatedState::random(&t, 1.0, 1);
        let traj = simulate(&s, 0.0, 0.01, &integ, &SimulationOptions::default()).unwrap();
        assert_eq!(traj.snapshots, vec![s]);
        assert_eq!(traj.steps, 0);
        assert_eq!(traj.log.records.len(), 1);
    }

    #[test]
    fn uneven_end_time_is_hit_exactly() {
        let t = TruncationSpec::<f64>::new(3, 1.0).unwrap();
        let integ = LiePoissonIntegrator::new(&t);
        let s = TruncatedState::random(&t, 0.5, 2);
        let traj = simulate(&s, 0.25, 0.1, &integ, &SimulationOptions::default()).unwrap();
        assert_eq!(traj.steps, 3);
        assert!((traj.final_state().time - 0.25).abs() < 1e-15);
        let again = simulate(&s, 0.25, 0.1, &integ, &SimulationOptions::default()).unwrap();
        assert_eq!(traj.final_state(), again.final_state());
    }

    #[test]
    fn growth_fit_recovers_rate() {
        let samples: Vec<(f64, f64)> = (0..100).map(|i| (i as f64 * 0.1, 1e-6 * (0.7 * i as f64 * 0.1).exp())).collect();
        let fit = fit_growth_rate(&samples, 1e-6, 1e-4).unwrap();
        assert!((fit.rate - 0.7).abs() < 1e-10);
        assert!(fit_growth_rate(&samples, 1.0, 2.0).is_none());
    }
}
