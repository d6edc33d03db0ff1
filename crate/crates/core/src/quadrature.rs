//! Adaptive Gauss–Kronrod (7/15) quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Panel budget; when it is exhausted the current estimate is returned.
const MAX_PANELS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Sum of the per-panel |Kronrod - Gauss| differences.
    pub error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let pair = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
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
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive: the panel with the largest error estimate is bisected
/// until the summed estimate meets `tol` or the panel budget runs out.
fn adapt<F: Fn(f64) -> f64>(f: &F, knots: &[f64], tol: f64) -> Estimate {
    let mut heap: BinaryHeap<Panel> = knots
        .windows(2)
        .filter(|w| w[0] != w[1])
        .map(|w| {
            let (value, error) = gk15(f, w[0], w[1]);
            Panel {
                a: w[0],
                b: w[1],
                value,
                error,
            }
        })
        .collect();
    let mut frozen = Vec::new();
    let mut total: f64 = heap.iter().map(|p| p.error).sum();
    while total > tol && heap.len() + frozen.len() < MAX_PANELS {
        let Some(p) = heap.pop() else {
            break;
        };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            frozen.push(p);
            continue;
        }
        total -= p.error;
        for (a, b) in [(p.a, m), (m, p.b)] {
            let (value, error) = gk15(f, a, b);
            total += error;
            heap.push(Panel { a, b, value, error });
        }
    }
    let mut panels = heap.into_vec();
    panels.extend(frozen);
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    Estimate {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.error).sum(),
    }
}

/// ∫_a^b f with absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Estimate {
    adapt(&f, &[a, b], tol)
}

/// Like [`integrate`] over consecutive `knots`, which become forced panel
/// boundaries.
pub fn integrate_with_knots<F: Fn(f64) -> f64>(f: F, knots: &[f64], tol: f64) -> Estimate {
    adapt(&f, knots, tol)
}
