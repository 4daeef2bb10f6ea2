//! Fixed-step RK4 integration with norm and arc-chord monitoring.

use std::f64::consts::PI;

use crate::contour::{arc_chord, contour_velocity_unchecked, ArcChordLimits, ArcChordReport, CurveState};
use crate::error::{Error, Result};
use crate::graph::{graph_rhs, GraphState, PhysParams};
use crate::spectral::{self, krasny_filter, norm, to_spectral, NormKind, NormSpec};

#[derive(Debug, Clone, PartialEq)]
pub enum InterfaceState {
    Graph(GraphState),
    Curve(CurveState),
}

impl InterfaceState {
    pub fn t(&self) -> f64 {
        match self {
            Self::Graph(g) => g.t,
            Self::Curve(c) => c.t,
        }
    }
}

/// A state made of periodic sample fields advanced in time.
pub trait PeriodicState: Clone {
    fn time(&self) -> f64;
    fn set_time(&mut self, t: f64);
    fn fields(&self) -> Vec<&[f64]>;
    fn fields_mut(&mut self) -> Vec<&mut Vec<f64>>;
    /// Samples of the interface height, used for the norm monitors.
    fn height(&self) -> &[f64];
    fn arc_chord(&self, limits: &ArcChordLimits) -> Result<ArcChordReport>;
    fn to_interface(&self) -> InterfaceState;
}

impl PeriodicState for GraphState {
    fn time(&self) -> f64 {
        self.t
    }
    fn set_time(&mut self, t: f64) {
        self.t = t;
    }
    fn fields(&self) -> Vec<&[f64]> {
        vec![&self.h]
    }
    fn fields_mut(&mut self) -> Vec<&mut Vec<f64>> {
        vec![&mut self.h]
    }
    fn height(&self) -> &[f64] {
        &self.h
    }
    fn arc_chord(&self, limits: &ArcChordLimits) -> Result<ArcChordReport> {
        arc_chord(&CurveState::from_graph(self), limits)
    }
    fn to_interface(&self) -> InterfaceState {
        InterfaceState::Graph(self.clone())
    }
}

impl PeriodicState for CurveState {
    fn time(&self) -> f64 {
        self.t
    }
    fn set_time(&mut self, t: f64) {
        self.t = t;
    }
    fn fields(&self) -> Vec<&[f64]> {
        vec![&self.p1, &self.z2]
    }
    fn fields_mut(&mut self) -> Vec<&mut Vec<f64>> {
        vec![&mut self.p1, &mut self.z2]
    }
    fn height(&self) -> &[f64] {
        &self.z2
    }
    fn arc_chord(&self, limits: &ArcChordLimits) -> Result<ArcChordReport> {
        arc_chord(self, limits)
    }
    fn to_interface(&self) -> InterfaceState {
        InterfaceState::Curve(self.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Krasny filter threshold; 0 disables filtering.
    pub filter_threshold: f64,
    /// Steps between norm reports; 0 reports only the endpoints.
    pub monitor_every: usize,
    /// Steps between stored snapshots; 0 stores none.
    pub output_every: usize,
    /// Analyticity weight of the `A^0_nu` monitor.
    pub nu: f64,
    pub arc_chord: ArcChordLimits,
    /// Any monitored norm above this aborts the run.
    pub blowup_limit: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 1.0,
            filter_threshold: 0.0,
            monitor_every: 10,
            output_every: 0,
            nu: 0.1,
            arc_chord: ArcChordLimits::default(),
            blowup_limit: 1e6,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Config(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("t_end must be nonnegative, got {}", self.t_end)));
        }
        if !(self.filter_threshold >= 0.0) {
            return Err(Error::Config("filter_threshold must be nonnegative".into()));
        }
        if !(self.nu >= 0.0) {
            return Err(Error::Config("nu must be nonnegative".into()));
        }
        Ok(())
    }

    /// Number of steps; the last one is shortened to land on `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormReport {
    pub t: f64,
    /// `(integral_T h^2)^{1/2}`.
    pub l2: f64,
    /// `(integral_T (d^3 h)^2)^{1/2} = (2 pi sum |k|^6 |h^(k)|^2)^{1/2}`.
    pub h3: f64,
    /// `sum |h^(k)|`.
    pub a0: f64,
    /// `sum e^{nu |k|} |h^(k)|`.
    pub a0_nu: f64,
    pub mean: f64,
    pub min_f: f64,
    pub max_f: f64,
}

impl NormReport {
    /// `(1 + t)^m ||h||_{L2} + ||h||_{H3}`.
    pub fn tnorm(&self, m: f64) -> f64 {
        (1.0 + self.t).powf(m) * self.l2 + self.h3
    }

    fn values(&self) -> [f64; 8] {
        [self.t, self.l2, self.h3, self.a0, self.a0_nu, self.mean, self.min_f, self.max_f]
    }
}

pub fn norm_report<S: PeriodicState>(state: &S, nu: f64, limits: &ArcChordLimits) -> Result<NormReport> {
    Ok(monitor(state, nu, limits)?.0)
}

fn monitor<S: PeriodicState>(state: &S, nu: f64, limits: &ArcChordLimits) -> Result<(NormReport, ArcChordReport)> {
    let h = state.height();
    let c = to_spectral(h)?;
    let ac = state.arc_chord(limits)?;
    let report = NormReport {
        t: state.time(),
        l2: spectral::l2_norm_samples(h),
        h3: (2.0 * PI).sqrt() * norm(&c, NormSpec { s: 3.0, nu: 0.0 }, NormKind::Sobolev),
        a0: norm(&c, NormSpec::L2, NormKind::Wiener),
        a0_nu: norm(&c, NormSpec { s: 0.0, nu }, NormKind::Wiener),
        mean: c.mean(),
        min_f: ac.min_f,
        max_f: ac.max_f,
    };
    Ok((report, ac))
}

fn blow_up<S: PeriodicState>(last: &S, detail: String) -> Error {
    Error::BlowUp { t: last.time(), detail, last_healthy: Box::new(last.to_interface()) }
}

fn check_finite<S: PeriodicState>(last: &S, stage: &str, k: &[Vec<f64>]) -> Result<()> {
    if k.iter().flatten().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(blow_up(last, format!("non-finite values in {stage}")))
    }
}

/// `base + dt * k`, component-wise over fields, at time `base.t + dt_time`.
fn offset<S: PeriodicState>(base: &S, k: &[Vec<f64>], dt: f64, dt_time: f64) -> S {
    let mut out = base.clone();
    for (f, kf) in out.fields_mut().into_iter().zip(k) {
        for (x, d) in f.iter_mut().zip(kf) {
            *x += dt * d;
        }
    }
    out.set_time(base.time() + dt_time);
    out
}

/// One classical Runge-Kutta step, followed by the Krasny filter when
/// `filter_threshold > 0`.
pub fn rk4_step<S, F>(state: &S, dt: f64, mut rhs: F, filter_threshold: f64) -> Result<S>
where
    S: PeriodicState,
    F: FnMut(&S) -> Result<Vec<Vec<f64>>>,
{
    let k1 = rhs(state)?;
    check_finite(state, "stage 1", &k1)?;
    let k2 = rhs(&offset(state, &k1, 0.5 * dt, 0.5 * dt))?;
    check_finite(state, "stage 2", &k2)?;
    let k3 = rhs(&offset(state, &k2, 0.5 * dt, 0.5 * dt))?;
    check_finite(state, "stage 3", &k3)?;
    let k4 = rhs(&offset(state, &k3, dt, dt))?;
    check_finite(state, "stage 4", &k4)?;
    let mut out = state.clone();
    for (fi, f) in out.fields_mut().into_iter().enumerate() {
        for (j, x) in f.iter_mut().enumerate() {
            *x += dt / 6.0 * (k1[fi][j] + 2.0 * k2[fi][j] + 2.0 * k3[fi][j] + k4[fi][j]);
        }
    }
    if filter_threshold > 0.0 {
        for f in out.fields_mut() {
            *f = krasny_filter(&to_spectral(f)?, filter_threshold).to_samples();
        }
    }
    check_finite(state, "update", &out.fields().iter().map(|f| f.to_vec()).collect::<Vec<_>>())?;
    out.set_time(state.time() + dt);
    Ok(out)
}

#[derive(Debug)]
pub struct Trajectory<S> {
    pub reports: Vec<NormReport>,
    pub snapshots: Vec<S>,
    /// Last healthy state reached.
    pub final_state: S,
    /// Reason the run stopped before `t_end`, if it did.
    pub abort: Option<Error>,
}

impl<S> Trajectory<S> {
    pub fn completed(&self) -> bool {
        self.abort.is_none()
    }

    /// The trajectory if it reached `t_end`, the abort error otherwise.
    pub fn into_result(self) -> Result<Self> {
        match self.abort {
            None => Ok(self),
            Some(e) => Err(e),
        }
    }

    pub fn sup_tnorm(&self, m: f64) -> f64 {
        self.reports.iter().map(|r| r.tnorm(m)).fold(0.0, f64::max)
    }
}

/// Integrates from `initial` to `t_end`. Monitors run at step 0, every
/// `monitor_every` steps and at the last step; a violation stops the run and
/// is stored in [`Trajectory::abort`].
pub fn integrate<S, F>(initial: S, cfg: &IntegratorConfig, mut rhs: F) -> Result<Trajectory<S>>
where
    S: PeriodicState,
    F: FnMut(&S) -> Result<Vec<Vec<f64>>>,
{
    cfg.validate()?;
    let t0 = initial.time();
    let steps = cfg.steps();
    let mut traj = Trajectory { reports: Vec::new(), snapshots: Vec::new(), final_state: initial, abort: None };
    let due = |step: usize| step == 0 || step == steps || (cfg.monitor_every > 0 && step % cfg.monitor_every == 0);
    let store = |step: usize| cfg.output_every > 0 && (step % cfg.output_every == 0 || step == steps);

    for step in 0..=steps {
        let state = &traj.final_state;
        if due(step) {
            match check_health(state, cfg) {
                Ok(r) => traj.reports.push(r),
                Err(e) => {
                    traj.abort = Some(e);
                    return Ok(traj);
                }
            }
        }
        if store(step) {
            traj.snapshots.push(state.clone());
        }
        if step == steps {
            break;
        }
        let t_next = t0 + ((step + 1) as f64 * cfg.dt).min(cfg.t_end);
        let h = t_next - state.time();
        match rk4_step(state, h, &mut rhs, cfg.filter_threshold) {
            Ok(mut next) => {
                next.set_time(t_next);
                traj.final_state = next;
            }
            Err(e) => {
                traj.abort = Some(e);
                return Ok(traj);
            }
        }
    }
    Ok(traj)
}

fn check_health<S: PeriodicState>(state: &S, cfg: &IntegratorConfig) -> Result<NormReport> {
    let (r, ac) = monitor(state, cfg.nu, &cfg.arc_chord)?;
    if !r.values().iter().all(|v| v.is_finite()) {
        return Err(blow_up(state, "non-finite norm".into()));
    }
    let big = r.l2.max(r.h3).max(r.a0).max(r.a0_nu);
    if big > cfg.blowup_limit {
        return Err(blow_up(state, format!("norm {big:.3e} exceeds {:.1e}", cfg.blowup_limit)));
    }
    if !ac.ok {
        return Err(Error::ArcChord(ac));
    }
    Ok(r)
}

/// Evolves a graph with [`graph_rhs`].
pub fn integrate_graph(
    initial: GraphState,
    params: &PhysParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<GraphState>> {
    integrate(initial, cfg, |s: &GraphState| Ok(vec![graph_rhs(s, params)?]))
}

/// Evolves an arbitrary curve with the boundary-integral velocity `N(z)`.
/// The arc-chord condition is enforced at the monitor cadence.
pub fn integrate_curve(
    initial: CurveState,
    params: &PhysParams,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<CurveState>> {
    let ac = arc_chord(&initial, &cfg.arc_chord)?;
    if !ac.ok {
        return Err(Error::ArcChord(ac));
    }
    integrate(initial, cfg, |s: &CurveState| {
        let v = contour_velocity_unchecked(s, params)?;
        Ok(vec![v.iter().map(|x| x[0]).collect(), v.iter().map(|x| x[1]).collect()])
    })
}
