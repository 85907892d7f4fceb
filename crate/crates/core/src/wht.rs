//! In-place fast Walsh–Hadamard butterflies (unnormalised).

use num_complex::Complex64;

/// Transforms `data` along the qubits whose bit is set in `axes`.
/// `data.len()` must be a power of two.
pub fn fwht_axes(data: &mut [Complex64], axes: u64) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1usize;
    let mut bit = 0;
    while h < len {
        if axes >> bit & 1 == 1 {
            for block in data.chunks_mut(2 * h) {
                let (lo, hi) = block.split_at_mut(h);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = x + y;
                    *b = x - y;
                }
            }
        }
        h <<= 1;
        bit += 1;
    }
}

pub fn fwht(data: &mut [Complex64]) {
    fwht_axes(data, u64::MAX);
}
