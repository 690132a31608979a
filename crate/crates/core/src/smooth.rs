#[allow(unused_imports)]
use num_traits::Float;

fn h(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

fn h1(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        h(t) / (t * t)
    }
}

fn h2(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        h(t) * (1.0 - 2.0 * t) / (t * t * t * t)
    }
}

/// C^∞ step falling from 1 at `t <= 0` to 0 at `t >= 1`, with its first two
/// derivatives.
pub(crate) fn falling_step(t: f64) -> (f64, f64, f64) {
    if t <= 0.0 {
        return (1.0, 0.0, 0.0);
    }
    if t >= 1.0 {
        return (0.0, 0.0, 0.0);
    }
    let (a, a1, a2) = (h(1.0 - t), -h1(1.0 - t), h2(1.0 - t));
    let (b, b1, b2) = (h(t), h1(t), h2(t));
    let s = a + b;
    let num = a1 * b - a * b1;
    let value = a / s;
    let d1 = num / (s * s);
    let d2 = (a2 * b - a * b2) / (s * s) - 2.0 * num * (a1 + b1) / (s * s * s);
    (value, d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_derivatives_match_finite_differences() {
        let e = 1e-5;
        for &t in &[0.1, 0.3, 0.5, 0.77, 0.95] {
            let (_, d1, d2) = falling_step(t);
            let fd1 = (falling_step(t + e).0 - falling_step(t - e).0) / (2.0 * e);
            let fd2 = (falling_step(t + e).0 - 2.0 * falling_step(t).0 + falling_step(t - e).0) / (e * e);
            assert!((d1 - fd1).abs() < 1e-7, "{t}: {d1} {fd1}");
            assert!((d2 - fd2).abs() < 1e-3 * (1.0 + d2.abs()), "{t}: {d2} {fd2}");
        }
        assert_eq!(falling_step(0.5).0, 0.5);
    }
}
