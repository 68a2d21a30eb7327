/// 64-bit linear congruential generator (Knuth's MMIX constants):
/// `state = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)`.
/// Outputs use the top 53 bits, so sequences are identical on every
/// platform.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

pub const LCG_MULTIPLIER: u64 = 6364136223846793005;
pub const LCG_INCREMENT: u64 = 1442695040888963407;

impl Lcg64 {
    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(LCG_MULTIPLIER)
            .wrapping_add(LCG_INCREMENT);
        self.state
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn next_index(&mut self, n: usize) -> usize {
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_sequence() {
        let mut r = Lcg64::new(0);
        assert_eq!(r.next_u64(), LCG_INCREMENT);
        assert_eq!(
            r.next_u64(),
            LCG_INCREMENT
                .wrapping_mul(LCG_MULTIPLIER)
                .wrapping_add(LCG_INCREMENT)
        );
    }

    #[test]
    fn unit_interval() {
        let mut r = Lcg64::new(42);
        for _ in 0..10_000 {
            let v = r.next_f64();
            assert!((0.0..1.0).contains(&v));
            assert!(r.next_index(3) < 3);
        }
    }
}
