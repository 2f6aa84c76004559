//! Adaptive Gauss–Kronrod quadrature on finite and semi-infinite intervals.

use crate::error::{Error, Result};

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
}

// 15-point Kronrod abscissae and weights; odd-indexed nodes carry the
// embedded 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_PANELS: usize = 4000;
const MAX_DOUBLINGS: usize = 80;

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    let mut fv = [0.0; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = abs_sum * half.abs();
    let res_asc = asc * half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    Panel {
        a,
        b,
        value,
        error: err.max(floor),
    }
}

/// Globally adaptive integration of `f` over `[a, b]`: the panel with the
/// largest error estimate is bisected until the summed estimate meets
/// `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Quadrature> {
    if !(abs_tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {abs_tol}"
        )));
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("integration limits must be finite"));
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    let mut panels = vec![gk15(&f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if !value.is_finite() {
            return Err(Error::Convergence {
                message: "integrand produced a non-finite value".into(),
                best: value,
            });
        }
        if error <= abs_tol {
            return Ok(Quadrature {
                value,
                abs_error: error,
            });
        }
        let (idx, worst) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, p)| (i, *p))
            .expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if panels.len() >= MAX_PANELS || mid <= worst.a || mid >= worst.b {
            return Err(Error::Convergence {
                message: format!(
                    "adaptive quadrature on [{a}, {b}] stalled with error {error:e} > {abs_tol:e}"
                ),
                best: value,
            });
        }
        panels[idx] = gk15(&f, worst.a, mid);
        panels.push(gk15(&f, mid, worst.b));
    }
}

/// `∫_lower^∞ f(x) dx` for an integrand that decays to zero.
///
/// The upper limit is first doubled (as a distance from `lower`) until
/// `|f| < abs_tol / 100` there, then extended by further doublings until two
/// successive extensions each change the result by less than `abs_tol`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    lower: f64,
    abs_tol: f64,
) -> Result<Quadrature> {
    if !(abs_tol > 0.0) {
        return Err(Error::domain(format!(
            "tolerance must be positive, got {abs_tol}"
        )));
    }
    if !lower.is_finite() {
        return Err(Error::domain("lower limit must be finite"));
    }
    let piece_tol = abs_tol / 4.0;
    let mut width = 1.0_f64;
    let mut doublings = 0;
    while f(lower + width).abs() >= abs_tol / 100.0 {
        width *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::Convergence {
                message: "integrand does not decay below the truncation threshold".into(),
                best: f64::NAN,
            });
        }
    }
    let head = integrate(&f, lower, lower + width, piece_tol)?;
    let mut value = head.value;
    let mut error = head.abs_error;
    let mut quiet = 0;
    let mut last_change = 0.0;
    while quiet < 2 {
        let tail =
            integrate(&f, lower + width, lower + 2.0 * width, piece_tol).map_err(|e| match e {
                Error::Convergence { message, .. } => Error::Convergence {
                    message,
                    best: value,
                },
                other => other,
            })?;
        value += tail.value;
        error += tail.abs_error;
        last_change = tail.value.abs();
        width *= 2.0;
        doublings += 1;
        if last_change < abs_tol {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if doublings > MAX_DOUBLINGS {
            return Err(Error::Convergence {
                message: "tail extension did not settle".into(),
                best: value,
            });
        }
    }
    Ok(Quadrature {
        value,
        abs_error: error + last_change,
    })
}
