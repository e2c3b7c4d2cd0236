//! The Walsh–Hadamard transform `v ↦ vΦ`, `Φ_{x,y} = (-1)^{x·y}`.

use std::ops::{Add, Sub};

use num_bigint::BigInt;

use crate::{Error, Result};

/// In-place butterfly; `v.len()` must be a power of two.
pub fn wht_in_place<T>(v: &mut [T]) -> Result<()>
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    if !v.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "transform length {} is not a power of two",
            v.len()
        )));
    }
    let mut half = 1;
    while half < v.len() {
        for block in v.chunks_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (a.clone(), b.clone());
                *a = x.clone() + y.clone();
                *b = x - y;
            }
        }
        half *= 2;
    }
    Ok(())
}

/// `vΦ` with exact integers.
pub fn wht(v: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut out = v.to_vec();
    wht_in_place(&mut out)?;
    Ok(out)
}

/// XOR convolution `(f ∗ g)_z = Σ_{x ⊕ y = z} f_x g_y` by definition.
pub fn xor_convolution(f: &[BigInt], g: &[BigInt]) -> Result<Vec<BigInt>> {
    if f.len() != g.len() || !f.len().is_power_of_two() {
        return Err(Error::InvalidArgument(
            "convolution needs equal power-of-two lengths".into(),
        ));
    }
    let mut out = vec![BigInt::default(); f.len()];
    for (x, fx) in f.iter().enumerate() {
        for (y, gy) in g.iter().enumerate() {
            out[x ^ y] += fx * gy;
        }
    }
    Ok(out)
}
