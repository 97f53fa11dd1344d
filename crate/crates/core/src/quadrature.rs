//! Adaptive Gauss–Kronrod (10/21) quadrature for complex-valued integrands of a
//! real parameter.
//!
//! Path integrals in the complex plane are reduced to this form by the caller
//! (parametrize the segment, multiply by its derivative).

use num_complex::Complex64;

use crate::error::{Error, Result};

// Kronrod abscissae and weights (QUADPACK qk21). Odd indices are the Gauss
// 10-point nodes.
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
    0.000_000_000_000_000_000_000_000_000_000_000,
];

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

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const MAX_SUBDIVISIONS: usize = 2000;

/// Tolerances for [`integrate`]. The estimate is accepted once
/// `err <= max(abs, rel * |result|)`.
#[derive(Debug, Clone, Copy)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
}

impl Default for QuadTol {
    fn default() -> Self {
        Self {
            abs: 1e-15,
            rel: 1e-14,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
}

fn kronrod<F>(f: &F, a: f64, b: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = half * XGK[j];
        let pair = f(center - dx)? + f(center + dx)?;
        kron += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let value = kron * half;
    let err = ((kron - gauss) * half).norm();
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::PoleError(format!(
            "non-finite integrand on [{a}, {b}]"
        )));
    }
    Ok(Panel { a, b, value, err })
}

/// Integrate `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until the global estimate meets `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let mut panels = vec![kronrod(&f, a, b)?];
    loop {
        let total: Complex64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= tol.abs.max(tol.rel * total.norm()) {
            return Ok(total);
        }
        if panels.len() >= MAX_SUBDIVISIONS {
            // Report what we have when the error has stalled at rounding level.
            if err <= 1e3 * f64::EPSILON * total.norm().max(1.0) {
                return Ok(total);
            }
            return Err(Error::NonConvergent(format!(
                "quadrature error {err:e} after {MAX_SUBDIVISIONS} panels"
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::NonConvergent(
                "quadrature panel width underflow".into(),
            ));
        }
        panels.push(kronrod(&f, p.a, mid)?);
        panels.push(kronrod(&f, mid, p.b)?);
    }
}

/// Integrate an analytic `g` along the straight segment from `z0` to `z1`.
pub fn integrate_segment<G>(g: G, z0: Complex64, z1: Complex64, tol: QuadTol) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64>,
{
    let dz = z1 - z0;
    integrate(|t| Ok(g(z0 + dz * t)? * dz), 0.0, 1.0, tol)
}
