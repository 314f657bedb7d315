use num::complex::Complex64;

/// Documented constant `c` in the accumulator error bound: summing `n` terms of modulus
/// at most 1, each produced by [`super::e_of`], stays within `c * n * f64::EPSILON` of the
/// exact sum of the exact unit vectors.
pub const ACCUMULATOR_ERROR_CONSTANT: f64 = 4.0;

/// Neumaier-compensated running sum of one real component.
#[derive(Clone, Copy, Debug, Default)]
struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for sums of complex numbers.
#[derive(Clone, Copy, Debug, Default)]
pub struct ComplexAccumulator {
    re: Compensated,
    im: Compensated,
    count: u64,
}

impl ComplexAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
        self.count += 1;
    }

    /// Folds another partial sum into this one.
    pub fn merge(&mut self, other: &ComplexAccumulator) {
        self.re.add(other.re.sum);
        self.re.add(other.re.comp);
        self.im.add(other.im.sum);
        self.im.add(other.im.comp);
        self.count += other.count;
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    /// Upper bound on the accumulated rounding error for unit-modulus terms.
    pub fn error_bound(&self) -> f64 {
        ACCUMULATOR_ERROR_CONSTANT * self.count as f64 * f64::EPSILON
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_small_terms() {
        let mut acc = ComplexAccumulator::new();
        acc.add(Complex64::new(1e16, 0.0));
        for _ in 0..1000 {
            acc.add(Complex64::new(1.0, -1.0));
        }
        acc.add(Complex64::new(-1e16, 0.0));
        assert_eq!(acc.value(), Complex64::new(1000.0, -1000.0));
        assert_eq!(acc.count(), 1002);
    }

    #[test]
    fn merge_is_additive() {
        let mut a = ComplexAccumulator::new();
        let mut b = ComplexAccumulator::new();
        a.add(Complex64::new(0.5, 0.25));
        b.add(Complex64::new(0.25, 0.5));
        b.add(Complex64::new(0.25, 0.25));
        a.merge(&b);
        assert_eq!(a.value(), Complex64::new(1.0, 1.0));
        assert_eq!(a.count(), 3);
    }
}
