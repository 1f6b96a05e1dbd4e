use std::f64::consts::PI;

// Lanczos approximation, g = 7, nine terms.
const G: f64 = 7.0;
const COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (x + i as f64);
    }
    let t = x + G + 0.5;
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        let mut fact = 1.0f64;
        for n in 1..=20u32 {
            let g = gamma(f64::from(n));
            assert!((g - fact).abs() <= 1e-12 * fact, "Gamma({n}) = {g}, want {fact}");
            fact *= f64::from(n);
        }
    }

    #[test]
    fn half_integers_and_reflection() {
        let sqrt_pi = PI.sqrt();
        assert!((gamma(1.5) - sqrt_pi / 2.0).abs() <= 1e-12 * sqrt_pi / 2.0);
        assert!((gamma(0.5) - sqrt_pi).abs() <= 1e-12 * sqrt_pi);
        assert!((gamma(-0.5) + 2.0 * sqrt_pi).abs() <= 1e-12 * 2.0 * sqrt_pi);
    }
}
