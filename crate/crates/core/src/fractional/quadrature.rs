use std::f64::consts::PI;
use std::sync::OnceLock;

pub const GL_ORDER: usize = 16;

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
pub fn gauss_legendre_unit() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for i in 0..n {
            let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            rule[i] = ((1.0 - z) / 2.0, w / 2.0);
        }
        rule
    })
}

/// Composite rule over consecutive breakpoints.
pub fn integrate<E>(
    breaks: &[f64],
    mut f: impl FnMut(f64) -> Result<f64, E>,
) -> Result<f64, E> {
    let rule = gauss_legendre_unit();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mut s = 0.0;
        for &(t, wt) in rule {
            s += wt * f(lo + (hi - lo) * t)?;
        }
        total += (hi - lo) * s;
    }
    Ok(total)
}

/// `panels` uniform panels on `[lo, hi]`, with the last one split
/// geometrically (ratio 1/4, `grading` times) toward `hi`.
pub fn graded_mesh(lo: f64, hi: f64, panels: usize, grading: usize) -> Vec<f64> {
    let h = (hi - lo) / panels as f64;
    let mut b: Vec<f64> = (0..panels).map(|i| lo + h * i as f64).collect();
    let mut gap = h;
    for _ in 0..grading {
        gap /= 4.0;
        b.push(hi - gap);
    }
    b.push(hi);
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_one_and_nodes_are_symmetric() {
        let r = gauss_legendre_unit();
        let s: f64 = r.iter().map(|p| p.1).sum();
        assert!((s - 1.0).abs() < 1e-14);
        for i in 0..GL_ORDER {
            assert!((r[i].0 + r[GL_ORDER - 1 - i].0 - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_for_degree_31() {
        let v: f64 = integrate::<()>(&[0.0, 1.0], |x| Ok(x.powi(31))).unwrap();
        assert!((v - 1.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn graded_mesh_is_increasing() {
        let m = graded_mesh(0.1, 1.0, 4, 3);
        assert!(m.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(m[0], 0.1);
        assert_eq!(*m.last().unwrap(), 1.0);
        assert_eq!(m.len(), 4 + 3 + 1);
    }
}
