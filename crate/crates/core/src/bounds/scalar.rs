use std::f64::consts::E;

use crate::combinatorics::factorial;
use crate::report::{CheckRow, Report};

fn k_grid() -> impl Iterator<Item = f64> {
    (1..=10).map(|i| i as f64 / 10.0)
}

/// `y^m e^{−Ky} ≤ m! K^{−m}` for `m ≤ 8`, `K ∈ {0.1, …, 1}`, over a
/// logarithmic `y` grid plus the maximiser `y = m/K`.
pub fn power_exponential_checks() -> Report {
    let mut r = Report::default();
    for m in 1..=8u32 {
        for k in k_grid() {
            let bound = factorial(m) as f64 * k.powi(-(m as i32));
            let ys = (0..=240).map(|i| 10f64.powf(-3.0 + i as f64 / 40.0)).chain([m as f64 / k]);
            let worst = ys.map(|y| y.powi(m as i32) * (-k * y).exp()).fold(0.0, f64::max);
            r.push(CheckRow::new(
                "power_exponential",
                format!("m={m},K={k}"),
                format!("<={bound:e}"),
                format!("{worst:e}"),
                worst <= bound,
            ));
        }
    }
    r
}

/// `Σ_{m∈Z} e^{−K|m|} ≤ 3/K` for `K ∈ {0.1, …, 1}`, by the closed form.
pub fn geometric_checks() -> Report {
    let mut r = Report::default();
    for k in k_grid() {
        let q = (-k).exp();
        let sum = (1.0 + q) / (1.0 - q);
        let bound = 3.0 / k;
        r.push(CheckRow::new(
            "geometric_sum",
            format!("K={k}"),
            format!("<={bound:e}"),
            format!("{sum:e}"),
            sum <= bound,
        ));
    }
    r
}

/// `n! ≥ (n/e)^n` for `n ≤ 20`.
pub fn stirling_checks() -> Report {
    let mut r = Report::default();
    for n in 0..=20u32 {
        let f = factorial(n) as f64;
        let low = (n as f64 / E).powi(n as i32);
        r.push(CheckRow::new(
            "stirling_lower",
            format!("n={n}"),
            format!(">={low:e}"),
            format!("{f:e}"),
            f >= low,
        ));
    }
    r
}

pub fn scalar_bound_checks() -> Report {
    let mut r = power_exponential_checks();
    r.extend(geometric_checks());
    r.extend(stirling_checks());
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        // max_y y e^{−y/2} = 2/e at y = 2
        let r = power_exponential_checks();
        let row = r.rows.iter().find(|x| x.instance == "m=1,K=0.5").unwrap();
        let v: f64 = row.actual.parse().unwrap();
        assert!((v - 2.0 / E).abs() < 1e-12);
        let g = geometric_checks();
        let v: f64 = g.rows.last().unwrap().actual.parse().unwrap();
        assert!((v - 2.1640).abs() < 1e-4);
        let s = stirling_checks();
        let row = &s.rows[5];
        assert_eq!(row.actual.parse::<f64>().unwrap(), 120.0);
        assert!((row.expected[2..].parse::<f64>().unwrap() - 21.06).abs() < 0.01);
        assert!(scalar_bound_checks().all_pass());
    }
}
