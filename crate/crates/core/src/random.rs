//! Seeded randomness. Every consumer derives its own stream from a path of
//! tags so results do not depend on evaluation order or thread scheduling.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Seed(pub u64);

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    pub fn child(self, tag: u64) -> Seed {
        Seed(splitmix(
            self.0 ^ splitmix(tag.wrapping_add(0x5851_f42d_4c95_7f2d)),
        ))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

/// Uniform point on the complex unit circle.
pub fn unit_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn children_differ_and_repeat() {
        let s = Seed(7);
        assert_ne!(s.child(0), s.child(1));
        assert_eq!(s.child(3), s.child(3));
        let a = unit_complex(&mut s.rng());
        let b = unit_complex(&mut s.rng());
        assert_eq!(a, b);
        assert!((a.norm() - 1.0).abs() < 1e-15);
    }
}
