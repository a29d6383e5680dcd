//! Float functions that work with or without `std`.

use num_traits::Float;

#[inline(always)]
pub(crate) fn sin(x: f64) -> f64 {
    Float::sin(x)
}

#[inline(always)]
pub(crate) fn cos(x: f64) -> f64 {
    Float::cos(x)
}

#[inline(always)]
pub(crate) fn sin_cos(x: f64) -> (f64, f64) {
    Float::sin_cos(x)
}

#[inline(always)]
pub(crate) fn sqrt(x: f64) -> f64 {
    Float::sqrt(x)
}

#[inline(always)]
pub(crate) fn ceil(x: f64) -> f64 {
    Float::ceil(x)
}

#[inline(always)]
pub(crate) fn rem_euclid(x: f64, m: f64) -> f64 {
    num_traits::Euclid::rem_euclid(&x, &m)
}
