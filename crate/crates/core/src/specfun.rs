//! Special functions and 1-D numerics: the Lobachevsky function, the
//! edge-length integrand of the regular truncated-tetrahedron family,
//! adaptive Simpson quadrature, and bracketing root finding.

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SpecfunError {
    #[error("argument {arg} outside the domain [{lo}, {hi})")]
    OutOfDomain { arg: f64, lo: f64, hi: f64 },
    #[error("adaptive quadrature exceeded the panel limit")]
    MaxSubdivisions,
    #[error("no sign change on the bracketing interval")]
    NoSignChange,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub subdivisions: u64,
}

/// zeta(2n) for n = 1..=32, enough for the Clausen power series at double
/// precision on |phi| <= pi.
const ZETA_EVEN: [f64; 32] = [
    1.644_934_066_848_226_4,
    1.082_323_233_711_138_1,
    1.017_343_061_984_449_2,
    1.004_077_356_197_944_4,
    1.000_994_575_127_818,
    1.000_246_086_553_308,
    1.000_061_248_135_058_8,
    1.000_015_282_259_408_6,
    1.000003817293265,
    1.000_000_953_962_033_8,
    1.000_000_238_450_502_7,
    1.000_000_059_608_189,
    1.000_000_014_901_554_9,
    1.000_000_003_725_334,
    1.000_000_000_931_327_5,
    1.000_000_000_232_831,
    1.000_000_000_058_207_7,
    1.000_000_000_014_552,
    1.000_000_000_003_638,
    1.000_000_000_000_909_5,
    1.000_000_000_000_227_4,
    1.000_000_000_000_056_8,
    1.000_000_000_000_014_2,
    1.000_000_000_000_003_6,
    1.000_000_000_000_000_9,
    1.000_000_000_000_000_2,
    1.000000000000000056,
    1.000000000000000014,
    1.000000000000000003,
    1.000000000000000001,
    1.0,
    1.0,
];

/// Lobachevsky function L(theta) = 1/2 sum_{k>=1} sin(2k theta)/k^2.
///
/// The defining sine series is summed with the logarithmic term split off
/// (Clausen form), which reaches full double precision in ~30 terms after
/// reducing theta by oddness and pi-periodicity; the raw series would need
/// ~10^7 terms for the same truncation threshold.
pub fn lobachevsky(theta: f64) -> f64 {
    // reduce to (-pi/2, pi/2] using the exact pi-periodicity of sin(2k theta)
    let r = theta - PI * (theta / PI).round();
    if r == 0.0 {
        return 0.0;
    }
    // L(r) = Cl2(2r)/2 with Cl2(phi) = phi - phi ln|phi| + sum zeta(2n) phi^(2n+1) / (n (2n+1) (2 pi)^(2n))
    let phi = 2.0 * r;
    let mut sum = phi - phi * phi.abs().ln();
    let ratio = (phi / (2.0 * PI)) * (phi / (2.0 * PI));
    let mut pow = phi;
    for (i, z) in ZETA_EVEN.iter().enumerate() {
        let n = (i + 1) as f64;
        pow *= ratio;
        let term = z * pow / (n * (2.0 * n + 1.0));
        sum += term;
        if term.abs() < 1e-14 * sum.abs().max(1e-30) {
            break;
        }
    }
    sum / 2.0
}

/// Volume of the regular ideal octahedron, `8 L(pi/4)`.
pub fn v8() -> f64 {
    8.0 * lobachevsky(PI / 4.0)
}

/// Volume of the regular ideal tetrahedron, `2 L(pi/6)`.
pub fn v3() -> f64 {
    2.0 * lobachevsky(PI / 6.0)
}

/// Internal edge length of the regular truncated tetrahedron with dihedral
/// angle `t`: `arccosh(cos t / (2 cos t - 1))`, defined for `0 <= t < pi/3`.
/// This is the integrand of the closed-form volume of the regular family.
pub fn edge_integrand(t: f64) -> Result<f64, SpecfunError> {
    if !(0.0..PI / 3.0).contains(&t) {
        return Err(SpecfunError::OutOfDomain {
            arg: t,
            lo: 0.0,
            hi: PI / 3.0,
        });
    }
    let c = t.cos();
    Ok((c / (2.0 * c - 1.0)).acosh())
}

const MAX_PANELS: u64 = 1_000_000;

/// Adaptive Simpson quadrature of `f` on `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadratureResult, SpecfunError> {
    assert!(a <= b, "integrate: a must not exceed b");
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            subdivisions: 1,
        });
    }
    struct State<F> {
        f: F,
        panels: u64,
    }
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        st: &mut State<F>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
    ) -> Result<(f64, f64), SpecfunError> {
        st.panels += 1;
        if st.panels > MAX_PANELS {
            return Err(SpecfunError::MaxSubdivisions);
        }
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (st.f)(lm);
        let frm = (st.f)(rm);
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let err = (left + right - whole) / 15.0;
        if err.abs() <= tol || (b - a) < 1e-15 * (1.0 + a.abs()) {
            return Ok((left + right + err, err.abs()));
        }
        let (lv, le) = rec(st, a, m, fa, flm, fm, left, tol / 2.0)?;
        let (rv, re) = rec(st, m, b, fm, frm, fb, right, tol / 2.0)?;
        Ok((lv + rv, le + re))
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(fa, fm, fb, b - a);
    let mut st = State { f, panels: 0 };
    let (value, err) = rec(&mut st, a, b, fa, fm, fb, whole, tol)?;
    Ok(QuadratureResult {
        value,
        abs_error_estimate: err,
        subdivisions: st.panels,
    })
}

/// Bisection on `[lo, hi]` down to an interval of width `tol`.
/// Deterministic; requires a sign change.
pub fn find_root<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<f64, SpecfunError> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo * fhi > 0.0 {
        return Err(SpecfunError::NoSignChange);
    }
    while hi - lo > tol {
        let m = 0.5 * (lo + hi);
        if m == lo || m == hi {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return Ok(m);
        }
        if flo * fm < 0.0 {
            hi = m;
        } else {
            lo = m;
            flo = fm;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    /// Literal partial sum of the defining series; independent oracle.
    fn lobachevsky_series(theta: f64, terms: u64) -> f64 {
        let mut s = 0.0;
        for k in 1..=terms {
            let k = k as f64;
            s += (2.0 * k * theta).sin() / (k * k);
        }
        s / 2.0
    }

    #[test]
    fn lobachevsky_zeros() {
        assert_eq!(lobachevsky(0.0), 0.0);
        assert!(lobachevsky(PI / 2.0).abs() < 1e-15);
        assert!(lobachevsky(PI).abs() < 1e-15);
    }

    #[test]
    fn v8_matches_series_oracle() {
        // The pi/4 series is alternating over odd k, so the K-term tail is < 1/K^2.
        let oracle = 8.0 * lobachevsky_series(PI / 4.0, 200_000);
        assert!((v8() - oracle).abs() < 1e-10);
        assert!((v8() - 3.663862).abs() < 5e-7);
    }

    #[test]
    fn v3_matches_series_oracle() {
        let oracle = 2.0 * lobachevsky_series(PI / 6.0, 3_000_000);
        assert!((v3() - oracle).abs() < 1e-6);
        assert!((v3() - 1.0149416064096536).abs() < 1e-12);
    }

    #[test]
    fn lobachevsky_odd_and_periodic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let t = (rng.gen::<f64>() - 0.5) * 20.0;
            assert!((lobachevsky(-t) + lobachevsky(t)).abs() < 1e-12);
            assert!((lobachevsky(t + PI) - lobachevsky(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn edge_integrand_domain_and_values() {
        assert_eq!(edge_integrand(0.0).unwrap(), 0.0);
        let v = edge_integrand(PI / 6.0).unwrap();
        // bisection oracle on cosh(l) = cos(pi/6) / (2 cos(pi/6) - 1)
        let target = (PI / 6.0).cos() / (2.0 * (PI / 6.0).cos() - 1.0);
        let l = find_root(|x| x.cosh() - target, 0.0, 2.0, 1e-12).unwrap();
        assert!((v - l).abs() < 1e-11);
        assert!((v - 0.5961).abs() < 1e-4);
        assert!(edge_integrand(PI / 3.0).is_err());
        assert!(edge_integrand(-0.1).is_err());
        // blows up approaching pi/3
        assert!(edge_integrand(PI / 3.0 - 1e-12).unwrap() > 10.0);
    }

    #[test]
    fn edge_integrand_strictly_increasing() {
        let mut prev = -1.0;
        for i in 0..1000 {
            let t = (i as f64 + 0.5) / 1000.0 * (PI / 3.0 - 1e-6);
            let v = edge_integrand(t).unwrap();
            assert!(v > prev, "not increasing at t={t}");
            prev = v;
        }
    }

    #[test]
    fn integrate_basics() {
        let r = integrate(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate(|t| t.sin(), 0.0, PI, 1e-12).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11);
        assert!(r.abs_error_estimate >= 0.0);
        assert!(r.subdivisions >= 1);
    }

    #[test]
    fn integrate_edge_integrand_to_pi_over_6() {
        let r = integrate(|t| edge_integrand(t).unwrap(), 0.0, PI / 6.0, 1e-9).unwrap();
        // forced by (v8 - vol(regular at l_2)) / 3
        assert!((r.value - 0.1460).abs() < 1e-4);
        assert!((r.value - 0.145_955_747_097_119_9).abs() < 1e-8);
    }

    #[test]
    fn integrate_is_additive() {
        let f = |t: f64| (t * t).exp().sin();
        let tol = 1e-10;
        let ab = integrate(f, 0.0, 0.9, tol).unwrap().value;
        let bc = integrate(f, 0.9, 1.7, tol).unwrap().value;
        let ac = integrate(f, 0.0, 1.7, tol).unwrap().value;
        assert!((ab + bc - ac).abs() < 2.0 * tol);
    }

    #[test]
    fn find_root_basics() {
        let r = find_root(|x| x - 0.5, 0.0, 1.0, 1e-12).unwrap();
        assert!((r - 0.5).abs() < 1e-12);
        let r = find_root(|x| x.cos(), 0.0, 2.0, 1e-12).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-11);
        let r = find_root(|x| x.cosh() - 1.18297, 0.0, 2.0, 1e-12).unwrap();
        assert!((r - 0.5961).abs() < 1e-4);
        assert_eq!(
            find_root(|x| x + 2.0, 0.0, 1.0, 1e-12).unwrap_err(),
            SpecfunError::NoSignChange
        );
    }
}
