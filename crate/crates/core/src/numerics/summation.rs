//! Compensated (error-carrying) accumulation.

use num_complex::Complex;

use crate::scalar::Scalar;

/// Neumaier variant of Kahan summation: the running compensation also
/// captures the case where the incoming term dominates the sum.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedSum<T> {
    sum: T,
    comp: T,
}

impl<T: Scalar> Default for CompensatedSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        CompensatedSum {
            sum: T::zero(),
            comp: T::zero(),
        }
    }

    pub fn add(&mut self, v: T) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp = self.comp + ((self.sum - t) + v);
        } else {
            self.comp = self.comp + ((v - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Component-wise compensated accumulation for complex terms.
#[derive(Debug, Clone, Copy)]
pub struct CompensatedComplexSum<T> {
    re: CompensatedSum<T>,
    im: CompensatedSum<T>,
}

impl<T: Scalar> Default for CompensatedComplexSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Scalar> CompensatedComplexSum<T> {
    pub fn new() -> Self {
        CompensatedComplexSum {
            re: CompensatedSum::new(),
            im: CompensatedSum::new(),
        }
    }

    pub fn add(&mut self, v: Complex<T>) {
        self.re.add(v.re);
        self.im.add(v.im);
    }

    pub fn value(&self) -> Complex<T> {
        Complex::new(self.re.value(), self.im.value())
    }
}
