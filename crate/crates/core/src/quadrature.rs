//! Globally adaptive Gauss–Kronrod quadrature over a fixed set of breakpoints.
//!
//! Every initial panel is integrated with the 21-point Kronrod rule. The
//! panel with the largest error estimate is bisected until the summed error
//! falls below `max(abs_tol, rel_tol * |I|)`. Panels whose error estimate is
//! already at the roundoff floor are retired instead of being split again.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
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

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Result of one panel of the 21-point rule.
#[derive(Debug, Clone, Copy)]
pub struct PanelEstimate {
    pub value: f64,
    pub error: f64,
    /// Integral of `|f|` over the panel.
    pub abs_value: f64,
}

/// 21-point Gauss–Kronrod rule on `[a, b]` with the QUADPACK error heuristic.
pub fn gauss_kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> PanelEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();

    #[allow(clippy::needless_range_loop)]
    for j in 0..5 {
        let jtw = 2 * j + 1;
        let x = half * XGK[jtw];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += WG[j] * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let x = half * XGK[jtwm1];
        let (f1, f2) = (f(center - x), f(center + x));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half.abs();
    let value = res_k * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;

    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (1.0_f64).min((200.0 * error / res_asc).powf(1.5));
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }

    PanelEstimate {
        value,
        error,
        abs_value: res_abs,
    }
}

/// Integral estimate with its accumulated error bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    /// True when refinement stopped because every remaining panel sat at
    /// the floating-point floor rather than because the target was met.
    pub roundoff_limited: bool,
}

/// Tolerance settings shared by every quadrature call.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            rel_tol: 1e-8,
            abs_tol: 1e-300,
            max_intervals: 400_000,
        }
    }
}

impl QuadSettings {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadSettings {
            rel_tol,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    est: PanelEstimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.est.error.total_cmp(&other.est.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

const GLOBAL_ROUNDOFF: f64 = 1e3 * f64::EPSILON;

fn at_roundoff_floor(p: &Panel) -> bool {
    let width = (p.b - p.a).abs();
    let scale = p.a.abs().max(p.b.abs()).max(f64::MIN_POSITIVE);
    p.est.error <= 100.0 * f64::EPSILON * p.est.abs_value || width <= 64.0 * f64::EPSILON * scale
}

/// Integrate `f` over `[breaks[0], breaks[last]]`, starting from the panels
/// delimited by `breaks` (which must be sorted ascending).
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breaks: &[f64],
    settings: &QuadSettings,
) -> Result<QuadEstimate> {
    if breaks.len() < 2 {
        return Ok(QuadEstimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            roundoff_limited: false,
        });
    }

    let mut heap = BinaryHeap::with_capacity(breaks.len() * 2);
    let mut retired: Vec<Panel> = Vec::new();
    for w in breaks.windows(2) {
        if w[1] > w[0] {
            let p = Panel {
                a: w[0],
                b: w[1],
                est: gauss_kronrod21(&f, w[0], w[1]),
            };
            heap.push(p);
        }
    }

    let sum = |heap: &BinaryHeap<Panel>, retired: &[Panel]| {
        let mut v = 0.0;
        let mut e = 0.0;
        let mut a = 0.0;
        for p in heap.iter().chain(retired.iter()) {
            v += p.est.value;
            e += p.est.error;
            a += p.est.abs_value;
        }
        (v, e, a)
    };

    let (mut total, mut total_err, mut total_abs) = sum(&heap, &retired);
    let mut since_resum = 0usize;
    let mut floor_hit = false;
    loop {
        let target = settings.abs_tol.max(settings.rel_tol * total.abs());
        if total_err <= target {
            break;
        }
        // A cancelling integral cannot be resolved below eps·∫|f|.
        if total_err <= GLOBAL_ROUNDOFF * total_abs {
            floor_hit = true;
            break;
        }
        let Some(worst) = heap.pop() else {
            // Everything left is at the roundoff floor.
            let (v, e, _) = sum(&heap, &retired);
            return Ok(QuadEstimate {
                value: v,
                error: e,
                intervals: retired.len(),
                roundoff_limited: true,
            });
        };
        if at_roundoff_floor(&worst) {
            retired.push(worst);
            continue;
        }
        if heap.len() + retired.len() + 2 > settings.max_intervals {
            let (v, e, _) = sum(&heap, &retired);
            return Err(Error::QuadratureNonConvergence {
                achieved: e / v.abs().max(f64::MIN_POSITIVE),
                target: settings.rel_tol,
                intervals: heap.len() + retired.len() + 1,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = Panel {
            a: worst.a,
            b: mid,
            est: gauss_kronrod21(&f, worst.a, mid),
        };
        let right = Panel {
            a: mid,
            b: worst.b,
            est: gauss_kronrod21(&f, mid, worst.b),
        };
        total += left.est.value + right.est.value - worst.est.value;
        total_err += left.est.error + right.est.error - worst.est.error;
        total_abs += left.est.abs_value + right.est.abs_value - worst.est.abs_value;
        heap.push(left);
        heap.push(right);

        since_resum += 1;
        if since_resum == 256 {
            (total, total_err, total_abs) = sum(&heap, &retired);
            since_resum = 0;
        }
    }

    let (value, error, _) = sum(&heap, &retired);
    Ok(QuadEstimate {
        value,
        error,
        intervals: heap.len() + retired.len(),
        roundoff_limited: floor_hit,
    })
}
