//! Second-kind Volterra equations `f(x) = r(x) + λ∫₀ˣ Ḡ(u) B̄(x−u) f(u) du` on a
//! uniform grid.

/// Forward marching with trapezoidal product weights; the diagonal term is
/// moved to the left-hand side with half weight.
pub fn march(lambda: f64, gbar: &[f64], bbar: &[f64], rhs: &[f64], h: f64) -> Vec<f64> {
    let n = rhs.len();
    let mut f = vec![0.0; n];
    let mut gf = vec![0.0; n];
    for i in 0..n {
        if i == 0 {
            f[0] = rhs[0];
        } else {
            let mut s = 0.5 * gf[0] * bbar[i];
            for j in 1..i {
                s += gf[j] * bbar[i - j];
            }
            f[i] = (rhs[i] + lambda * h * s) / (1.0 - 0.5 * lambda * h * gbar[i] * bbar[0]);
        }
        gf[i] = gbar[i] * f[i];
    }
    f
}

/// Composite Simpson over the first `m + 1` nodes, with a 3/8 panel at the
/// end when `m` is odd.
fn simpson_nodes(v: &[f64], h: f64) -> f64 {
    let m = v.len() - 1;
    match m {
        0 => 0.0,
        1 => 0.5 * h * (v[0] + v[1]),
        _ => {
            let (even_end, tail) = if m.is_multiple_of(2) {
                (m, 0.0)
            } else {
                let k = m - 3;
                (
                    k,
                    3.0 * h / 8.0 * (v[k] + 3.0 * v[k + 1] + 3.0 * v[k + 2] + v[k + 3]),
                )
            };
            let mut s = 0.0;
            if even_end > 0 {
                s = v[0] + v[even_end];
                for (i, x) in v.iter().enumerate().take(even_end).skip(1) {
                    s += if i % 2 == 1 { 4.0 } else { 2.0 } * x;
                }
                s *= h / 3.0;
            }
            s + tail
        }
    }
}

/// Sup-norm of `f − r − λ∫Ḡ B̄ f` at the grid nodes, with the integral taken
/// by a higher-order rule than the one used to march.
pub fn residual(lambda: f64, gbar: &[f64], bbar: &[f64], rhs: &[f64], f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let mut buf = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for i in 0..n {
        buf.clear();
        buf.extend((0..=i).map(|j| gbar[j] * bbar[i - j] * f[j]));
        let r = f[i] - rhs[i] - lambda * simpson_nodes(&buf, h);
        worst = worst.max(r.abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let h = 0.1;
        for m in 2..9 {
            let v: Vec<f64> = (0..=m).map(|i| (i as f64 * h).powi(3)).collect();
            let exact = (m as f64 * h).powi(4) / 4.0;
            assert!((simpson_nodes(&v, h) - exact).abs() < 1e-12, "m = {m}");
        }
    }

    #[test]
    fn renewal_type_equation() {
        // f = 1 + ∫₀ˣ f  has solution eˣ
        let n = 201;
        let h = 0.005;
        let ones = vec![1.0; n];
        let f = march(1.0, &ones, &ones, &ones, h);
        let x_end = (n - 1) as f64 * h;
        assert!((f[n - 1] - x_end.exp()).abs() < 1e-5);
        assert!(residual(1.0, &ones, &ones, &ones, &f, h) < 1e-5);
    }
}
