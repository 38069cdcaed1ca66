//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to absolute tolerance `tol` with adaptive
/// Simpson refinement and Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Integrates over `[0, upper]` split into dyadic panels `[0, s], [s, 2s], ...`
/// so that integrands spread over many scales are resolved panel by panel.
pub fn integrate_panels<F: Fn(f64) -> f64>(f: &F, scale: f64, upper: f64, tol: f64) -> f64 {
    if upper <= 0.0 {
        return 0.0;
    }
    let scale = if scale > 0.0 && scale < upper {
        scale
    } else {
        upper
    };
    let mut edges = vec![0.0, scale];
    while *edges.last().unwrap() < upper {
        let next = (edges.last().unwrap() * 2.0).min(upper);
        edges.push(next);
    }
    let panels = (edges.len() - 1) as f64;
    edges
        .windows(2)
        .map(|w| adaptive_simpson(f, w[0], w[1], tol / panels))
        .sum()
}

/// Composite trapezoid rule on a uniform grid with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    match values.len() {
        0 | 1 => 0.0,
        n => h * (values.iter().sum::<f64>() - 0.5 * (values[0] + values[n - 1])),
    }
}

/// Running trapezoid integral: `out[i] = ∫₀^{x_i}` on a uniform grid.
pub fn cumulative_trapezoid(values: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            acc += 0.5 * h * (values[i - 1] + v);
        }
        out.push(acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = adaptive_simpson(&|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_tail_over_panels() {
        let v = integrate_panels(&|x: f64| (-x).exp(), 1.0, 60.0, 1e-11);
        assert!((v - (1.0 - (-60.0f64).exp())).abs() < 1e-10);
    }

    #[test]
    fn kinked_integrand() {
        let v = integrate_panels(
            &|x: f64| if x < 1.0 { 1.0 } else { x.powi(-3) },
            0.7,
            1e4,
            1e-11,
        );
        assert!((v - (1.0 + 0.5 * (1.0 - 1e-8))).abs() < 1e-9);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let h = 0.1;
        let vals: Vec<f64> = (0..11).map(|i| 2.0 * i as f64 * h).collect();
        assert!((trapezoid(&vals, h) - 1.0).abs() < 1e-14);
        let cum = cumulative_trapezoid(&vals, h);
        assert!((cum[10] - 1.0).abs() < 1e-14);
    }
}
