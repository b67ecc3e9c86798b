//! Globally adaptive 21-point Gauss–Kronrod quadrature.
//!
//! The error heuristics follow QUADPACK's `qk21`/`qag`: the raw Gauss–Kronrod
//! difference is rescaled, and floored at a multiple of machine epsilon times
//! `∫|f|` so intervals at round-off level are never split further.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 21-point Kronrod abscissae; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_980_306_690,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Polynomial degree integrated exactly by the Kronrod rule.
pub const KRONROD_DEGREE: usize = 31;

/// Requested accuracy: the result is accepted once the error estimate is below
/// `max(abs, rel·|I|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-8,
            abs: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Default cap on the number of subintervals.
pub const DEFAULT_MAX_SUBDIVISIONS: usize = 4000;

/// Adaptive integrator with a fixed subdivision budget.
#[derive(Debug, Clone, Copy)]
pub struct Integrator {
    pub tolerance: Tolerance,
    pub max_subdivisions: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Self {
            tolerance: Tolerance::default(),
            max_subdivisions: DEFAULT_MAX_SUBDIVISIONS,
        }
    }
}

impl Integrator {
    pub fn new(tolerance: Tolerance) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n.max(1);
        self
    }

    /// Integrates a scalar function over `[lo, hi]`.
    pub fn integrate<F>(&self, f: F, lo: f64, hi: f64) -> Result<QuadratureResult>
    where
        F: Fn(f64) -> f64,
    {
        let out = self.integrate_vec(|x| [f(x)], lo, hi)?;
        Ok(QuadratureResult {
            value: out.value[0],
            abs_error_estimate: out.abs_error_estimate[0],
            evaluations: out.evaluations,
        })
    }

    /// Integrates `N` functions sharing one evaluation, refining until every
    /// component meets the tolerance.
    pub fn integrate_vec<F, const N: usize>(&self, f: F, lo: f64, hi: f64) -> Result<VecResult<N>>
    where
        F: Fn(f64) -> [f64; N],
    {
        self.try_integrate_vec(|x| Ok(f(x)), lo, hi)
    }

    /// [`Integrator::integrate_vec`] for integrands that can fail; the first
    /// error aborts the integration.
    pub fn try_integrate_vec<F, const N: usize>(
        &self,
        f: F,
        lo: f64,
        hi: f64,
    ) -> Result<VecResult<N>>
    where
        F: Fn(f64) -> Result<[f64; N]>,
    {
        validate_interval(lo, hi)?;
        if lo == hi {
            return Ok(VecResult {
                value: [0.0; N],
                abs_error_estimate: [0.0; N],
                evaluations: 0,
            });
        }
        let first = Panel::new(&f, lo, hi)?;
        let mut evaluations = 21;
        let mut value = first.value;
        let mut error = first.error;
        let mut heap = BinaryHeap::new();
        heap.push(first);

        loop {
            if converged(&value, &error, &self.tolerance) {
                break;
            }
            if heap.len() >= self.max_subdivisions {
                return Err(no_convergence(lo, hi, &value, &error, &self.tolerance));
            }
            let worst = match heap.pop() {
                Some(p) => p,
                None => break,
            };
            if !worst.splittable() {
                // everything left is at round-off level
                heap.push(worst);
                break;
            }
            let mid = 0.5 * (worst.lo + worst.hi);
            let left = Panel::new(&f, worst.lo, mid)?;
            let right = Panel::new(&f, mid, worst.hi)?;
            evaluations += 42;
            for i in 0..N {
                value[i] += left.value[i] + right.value[i] - worst.value[i];
                error[i] += left.error[i] + right.error[i] - worst.error[i];
            }
            heap.push(left);
            heap.push(right);
        }

        // Re-sum from the panels so the result does not carry the running
        // update's cancellation error.
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        let mut panels = heap.into_vec();
        panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        for p in &panels {
            for i in 0..N {
                value[i] += p.value[i];
                error[i] += p.error[i];
            }
        }
        Ok(VecResult {
            value,
            abs_error_estimate: error,
            evaluations,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VecResult<const N: usize> {
    pub value: [f64; N],
    pub abs_error_estimate: [f64; N],
    pub evaluations: usize,
}

/// Integrates `f` over `[lo, hi]` to `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_adaptive<F>(
    f: F,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    if !(rel_tol > 0.0 && abs_tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "tolerances must be positive (rel = {rel_tol}, abs = {abs_tol})"
        )));
    }
    if !(lo < hi) {
        return Err(Error::Domain(format!("need lo < hi, got [{lo}, {hi}]")));
    }
    Integrator::new(Tolerance::new(rel_tol, abs_tol)).integrate(f, lo, hi)
}

fn checked<const N: usize>(v: [f64; N], x: f64) -> Result<[f64; N]> {
    if v.iter().all(|y| y.is_finite()) {
        Ok(v)
    } else {
        Err(Error::Domain(format!("integrand is not finite at x = {x}")))
    }
}

fn validate_interval(lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::Domain(format!("bad integration interval [{lo}, {hi}]")));
    }
    Ok(())
}

fn converged<const N: usize>(value: &[f64; N], error: &[f64; N], tol: &Tolerance) -> bool {
    (0..N).all(|i| error[i] <= tol.target(value[i]))
}

fn no_convergence<const N: usize>(
    lo: f64,
    hi: f64,
    value: &[f64; N],
    error: &[f64; N],
    tol: &Tolerance,
) -> Error {
    // report the component furthest from its target
    let worst = (0..N)
        .max_by(|&a, &b| {
            let ra = error[a] / tol.target(value[a]);
            let rb = error[b] / tol.target(value[b]);
            ra.total_cmp(&rb)
        })
        .unwrap_or(0);
    Error::NoConvergence {
        lo,
        hi,
        estimate: value[worst],
        error: error[worst],
    }
}

struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    value: [f64; N],
    error: [f64; N],
    priority: f64,
    roundoff: bool,
}

impl<const N: usize> Panel<N> {
    fn new<F>(f: &F, lo: f64, hi: f64) -> Result<Self>
    where
        F: Fn(f64) -> Result<[f64; N]>,
    {
        let center = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let fc = checked(f(center)?, center)?;
        let mut kronrod = [0.0; N];
        let mut gauss = [0.0; N];
        let mut res_abs = [0.0; N];
        for i in 0..N {
            kronrod[i] = fc[i] * WGK[10];
            res_abs[i] = kronrod[i].abs();
        }
        let mut f1 = [[0.0; N]; 10];
        let mut f2 = [[0.0; N]; 10];
        for j in 0..10 {
            let dx = half * XGK[j];
            let a = checked(f(center - dx)?, center - dx)?;
            let b = checked(f(center + dx)?, center + dx)?;
            for i in 0..N {
                kronrod[i] += WGK[j] * (a[i] + b[i]);
                res_abs[i] += WGK[j] * (a[i].abs() + b[i].abs());
                if j % 2 == 1 {
                    gauss[i] += WG[j / 2] * (a[i] + b[i]);
                }
            }
            f1[j] = a;
            f2[j] = b;
        }
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        let mut roundoff = true;
        let mut priority: f64 = 0.0;
        for i in 0..N {
            let mean = 0.5 * kronrod[i];
            let mut res_asc = WGK[10] * (fc[i] - mean).abs();
            for j in 0..10 {
                res_asc += WGK[j] * ((f1[j][i] - mean).abs() + (f2[j][i] - mean).abs());
            }
            let scale = half.abs();
            value[i] = kronrod[i] * half;
            let raw = ((kronrod[i] - gauss[i]) * half).abs();
            let (err, at_floor) = rescale_error(raw, res_abs[i] * scale, res_asc * scale);
            error[i] = err;
            roundoff &= at_floor;
            priority = priority.max(err);
        }
        let width_ok = (hi - lo) > 64.0 * f64::EPSILON * (lo.abs().max(hi.abs()).max(1e-300));
        Ok(Self {
            lo,
            hi,
            value,
            error,
            priority,
            roundoff: roundoff || !width_ok,
        })
    }

    fn splittable(&self) -> bool {
        !self.roundoff
    }
}

impl<const N: usize> PartialEq for Panel<N> {
    fn eq(&self, other: &Self) -> bool {
        self.priority == other.priority && self.lo == other.lo
    }
}

impl<const N: usize> Eq for Panel<N> {}

impl<const N: usize> PartialOrd for Panel<N> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<const N: usize> Ord for Panel<N> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // round-off panels sink to the bottom; ties broken by position so the
        // refinement order is deterministic
        let a = if self.roundoff { -1.0 } else { self.priority };
        let b = if other.roundoff { -1.0 } else { other.priority };
        a.total_cmp(&b).then_with(|| other.lo.total_cmp(&self.lo))
    }
}

/// QUADPACK error rescaling. Returns the estimate and whether it sits at the
/// round-off floor.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> (f64, bool) {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && floor >= scaled {
        return (floor, true);
    }
    (scaled, scaled == 0.0)
}
