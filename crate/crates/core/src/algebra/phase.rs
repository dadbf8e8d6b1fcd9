use core::f64::consts::PI;

use num_complex::Complex64;

/// `ω^k` for `ω = exp(2πi/order)`. Multiples of a quarter turn are returned
/// exactly so that Pauli phases never pick up rounding noise.
pub fn root_of_unity(order: u8, k: i64) -> Complex64 {
    let q = order as i64;
    let k = k.rem_euclid(q);
    if (4 * k) % q == 0 {
        return match (4 * k) / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / q as f64)
}

/// Chiral weight `1 / (1 - ω^{-a})` attached to the `a`-th power of a clock
/// generator in the chiral Potts type Hamiltonians.
pub fn chiral_weight(order: u8, a: i64) -> Complex64 {
    Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - root_of_unity(order, -a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_are_exact() {
        assert_eq!(root_of_unity(2, 1), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(4, 3), Complex64::new(0.0, -1.0));
        assert_eq!(root_of_unity(4, -1), Complex64::new(0.0, -1.0));
        assert_eq!(root_of_unity(3, 3), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn cube_roots() {
        let w = root_of_unity(3, 1);
        assert!((w * w * w - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((w + w * w + Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn ising_weight_is_one_half() {
        assert_eq!(chiral_weight(2, 1), Complex64::new(0.5, 0.0));
    }
}
