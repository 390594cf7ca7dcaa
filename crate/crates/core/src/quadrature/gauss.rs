//! The 21-point Gauss–Kronrod rule and its embedded 10-point Gauss rule.

use crate::{Complex, Error, Result};

/// Kronrod abscissae on [−1, 1] (non-negative half, descending).
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
    0.123_491_976_262_065_851_077_208_292_366_483,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Nodes and weights of the 10-point Gauss–Legendre rule on [−1, 1].
pub(crate) fn gauss_legendre_10() -> [(f64, f64); 10] {
    let mut rule = [(0.0, 0.0); 10];
    for (k, w) in WG.iter().enumerate() {
        let x = XGK[2 * k + 1];
        rule[2 * k] = (-x, *w);
        rule[2 * k + 1] = (x, *w);
    }
    rule
}

/// Result of one rule application on a panel.
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub a: f64,
    pub b: f64,
    pub value: Complex,
    /// Truncation error estimate, excluding rounding.
    pub error: f64,
    /// GK21 estimate of ∫|f|.
    pub l1: f64,
}

fn checked(f: &mut impl FnMut(f64) -> Result<Complex>, t: f64) -> Result<Complex> {
    let v = f(t)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(t))
    }
}

/// Applies GK21 on `[a, b]` with the QUADPACK error heuristic. The rounding
/// floor `50·ε·∫|f|` is left to the caller (see [`Panel::roundoff`]).
pub fn gk21(f: &mut impl FnMut(f64) -> Result<Complex>, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, center)?;
    let mut kronrod = fc * WGK[10];
    let mut gauss = Complex::new(0.0, 0.0);
    let mut abs_sum = fc.norm() * WGK[10];
    let mut values = [(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0)); 10];
    for (j, slot) in values.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = checked(f, center - dx)?;
        let f2 = checked(f, center + dx)?;
        kronrod += (f1 + f2) * WGK[j];
        abs_sum += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
        *slot = (f1, f2);
    }
    let mean = kronrod * 0.5;
    let mut asc = (fc - mean).norm() * WGK[10];
    for (j, (f1, f2)) in values.iter().enumerate() {
        asc += ((f1 - mean).norm() + (f2 - mean).norm()) * WGK[j];
    }
    let scale = half.abs();
    let value = kronrod * half;
    let resabs = abs_sum * scale;
    let resasc = asc * scale;
    let mut error = ((kronrod - gauss) * half).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    Ok(Panel {
        a,
        b,
        value,
        error,
        l1: resabs,
    })
}

impl Panel {
    /// Rounding-level accuracy limit of the panel value.
    pub fn roundoff(&self) -> f64 {
        50.0 * f64::EPSILON * self.l1
    }
}
