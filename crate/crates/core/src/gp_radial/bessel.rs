//! Bessel functions of the first kind Jₙ(x) for integer order.
//!
//! The ascending series is used up to x = 12, where the largest term is
//! about e¹² / 2π and cancellation costs at most four digits. Beyond that
//! Miller's backward recurrence normalised by J₀ + 2ΣJ₂ₖ = 1 is used.

const SERIES_LIMIT: f64 = 12.0;

/// Jₙ(x) for n ≥ 0 and finite x ≥ 0; odd/even parity is applied for x < 0.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 1 { -v } else { v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT {
        ascending_series(n, x)
    } else {
        backward_recurrence(n, x)
    }
}

fn ascending_series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / f64::from(k);
    }
    let q = half * half;
    let mut sum = term;
    let mut m = 1.0;
    loop {
        term *= -q / (m * (m + f64::from(n)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs().max(1e-300) && m > half {
            break;
        }
        m += 1.0;
        if m > 500.0 {
            break;
        }
    }
    sum
}

fn backward_recurrence(n: u32, x: f64) -> f64 {
    let start = {
        let base = (n as f64).max(x) as usize + 40 + (40.0 * x).sqrt() as usize;
        base + (base % 2)
    };
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let prev = 2.0 * k as f64 / x * cur - next;
        next = cur;
        cur = prev;
        if k - 1 == n as usize {
            wanted = cur;
        }
        if (k - 1) % 2 == 0 && k - 1 > 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;
    wanted / norm
}

/// k-th positive zero j_{n,k} (k ≥ 1), by scanning then bisection to 1e-14.
pub fn bessel_zero(n: u32, k: u32) -> f64 {
    assert!(k >= 1, "zeros are numbered from 1");
    let step = 0.05;
    let mut a = f64::from(n) + step;
    let mut fa = bessel_j(n, a);
    let mut found = 0;
    loop {
        let b = a + step;
        let fb = bessel_j(n, b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == k {
                return bisect(|x| bessel_j(n, x), a, b, 1e-14);
            }
        }
        a = b;
        fa = fb;
    }
}

/// First positive zero j_{n,1}.
pub fn first_zero(n: u32) -> f64 {
    bessel_zero(n, 1)
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(1, 0.0), 0.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
    }

    #[test]
    fn tabulated_values() {
        // reference values from an independent double-precision implementation
        let cases = [
            (0, 1.0, 0.765_197_686_557_966_6),
            (1, 1.0, 0.440_050_585_744_933_5),
            (0, 5.0, -0.177_596_771_314_338_3),
            (1, 10.0, 0.043_472_746_168_861_6),
            (2, 3.0, 0.486_091_260_585_891_1),
            (0, 20.0, 0.167_024_664_340_583_2),
            (1, 15.0, 0.205_104_038_613_522_8),
            (5, 25.0, -0.066_007_995_398_422_98),
        ];
        for (n, x, expected) in cases {
            let got = bessel_j(n, x);
            assert!((got - expected).abs() < 1e-12, "J{n}({x}) = {got}, expected {expected}");
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_the_switch() {
        for n in 0..6 {
            for x in [11.0, 11.5, 12.0] {
                let d = (ascending_series(n, x) - backward_recurrence(n, x)).abs();
                assert!(d < 1e-12, "n={n} x={x} diff={d}");
            }
        }
    }

    #[test]
    fn three_term_recurrence_holds() {
        for n in 1..8u32 {
            for x in [0.3, 2.5, 7.0, 13.0, 30.0] {
                let lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
                let rhs = 2.0 * f64::from(n) / x * bessel_j(n, x);
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn first_zeros() {
        assert!((first_zero(0) - 2.404_825_557_695_773).abs() < 1e-10);
        assert!((first_zero(1) - 3.831_705_970_207_512).abs() < 1e-10);
        assert!((first_zero(2) - 5.135_622_301_840_683).abs() < 1e-10);
        assert!((bessel_zero(1, 2) - 7.015_586_669_815_619).abs() < 1e-10);
    }
}
