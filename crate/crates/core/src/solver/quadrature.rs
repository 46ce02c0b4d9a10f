use num_complex::Complex64;

use super::config::Quadrature;

/// `F_i = ∫_{t_0}^{t_i} f` on a uniform mesh of spacing `h`.
///
/// Simpson pairs panels from the origin; an odd end panel uses the
/// three-point rule `h/12 (−f_{i−2} + 8f_{i−1} + 5f_i)`, and the first panel
/// `h/12 (5f_0 + 8f_1 − f_2)`.
pub fn cumulative(f: &[Complex64], h: f64, rule: Quadrature) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); f.len()];
    if f.len() < 2 {
        return out;
    }
    match rule {
        Quadrature::Trapezoid => {
            for i in 1..f.len() {
                out[i] = out[i - 1] + (f[i - 1] + f[i]) * (h / 2.0);
            }
        }
        Quadrature::Simpson if f.len() == 2 => {
            out[1] = (f[0] + f[1]) * (h / 2.0);
        }
        Quadrature::Simpson => {
            out[1] = (f[0] * 5.0 + f[1] * 8.0 - f[2]) * (h / 12.0);
            for i in 2..f.len() {
                out[i] = if i % 2 == 0 {
                    out[i - 2] + (f[i - 2] + f[i - 1] * 4.0 + f[i]) * (h / 3.0)
                } else {
                    out[i - 1] + (f[i - 1] * 8.0 + f[i] * 5.0 - f[i - 2]) * (h / 12.0)
                };
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_low_degree() {
        let h = 0.1;
        let f: Vec<Complex64> = (0..12).map(|i| Complex64::new((i as f64 * h).powi(2), 1.0)).collect();
        let s = cumulative(&f, h, Quadrature::Simpson);
        for (i, v) in s.iter().enumerate() {
            let t = i as f64 * h;
            assert!((v.re - t.powi(3) / 3.0).abs() < 1e-14, "{i}");
            assert!((v.im - t).abs() < 1e-14);
        }
        let g: Vec<Complex64> = (0..12).map(|i| Complex64::new(i as f64 * h, 0.0)).collect();
        let tr = cumulative(&g, h, Quadrature::Trapezoid);
        assert!((tr[11].re - 0.5 * 1.1f64.powi(2)).abs() < 1e-14);
    }

    #[test]
    fn oscillatory_convergence() {
        let err = |n: usize, rule| {
            let h = 1.0 / n as f64;
            let f: Vec<Complex64> = (0..=n).map(|i| Complex64::from_polar(1.0, 3.0 * i as f64 * h)).collect();
            let want = (Complex64::from_polar(1.0, 3.0) - 1.0) / Complex64::new(0.0, 3.0);
            (cumulative(&f, h, rule)[n] - want).norm()
        };
        let r = err(41, Quadrature::Simpson) / err(81, Quadrature::Simpson);
        assert!(r > 8.0, "{r}");
        let r = err(40, Quadrature::Trapezoid) / err(80, Quadrature::Trapezoid);
        assert!((r - 4.0).abs() < 0.1, "{r}");
    }
}
