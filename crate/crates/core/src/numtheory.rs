//! Primality, random primes, NTT-friendly primes and CRT recombination.

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use crate::{Error, Result};

/// Maximum number of `k` values tried by [`find_ntt_prime`].
pub const NTT_PRIME_CANDIDATES: usize = 4096;

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(m)) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for every 64-bit integer.
///
/// Miller-Rabin with the first twelve primes as witnesses; this witness set
/// has no strong pseudoprime below 3.3 · 10^24.
pub fn is_prime(u: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if u < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if u.is_multiple_of(p) {
            return u == p;
        }
    }
    let mut d = u - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    if u < 1 << 63 {
        let m = Montgomery::new(u);
        let (one, minus_one) = (m.one(), m.to_mont(u - 1));
        return WITNESSES.iter().all(|&a| {
            let mut x = m.pow(m.to_mont(a), d);
            if x == one || x == minus_one {
                return true;
            }
            for _ in 1..r {
                x = m.mul(x, x);
                if x == minus_one {
                    return true;
                }
            }
            false
        });
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, u);
        if x == 1 || x == u - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, u);
            if x == u - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Number of sampling rounds used by [`pickprime`]: `⌈ln u⌉ + 2`.
pub fn pickprime_rounds(u: u64) -> u32 {
    (u as f64).ln().ceil() as u32 + 2
}

/// Samples a uniformly random prime `≤ u`, or `None` ("not found").
///
/// Draws up to `⌈ln u⌉ + 2` integers uniformly from `[1, u]` and returns the
/// first prime. Conditioned on success the prime is uniform; failure happens
/// with probability at most `1/e` for every `u ≥ 2`.
pub fn pickprime<R: Rng + ?Sized>(u: u64, rng: &mut R) -> Option<u64> {
    if u < 2 {
        return None;
    }
    (0..pickprime_rounds(u))
        .map(|_| rng.gen_range(1..=u))
        .find(|&i| is_prime(i))
}

/// All primes `≤ n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Distinct prime divisors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    if is_prime(n) {
        return vec![n];
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
            if is_prime(n) {
                break;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// A residue modulo an odd prime `q < 2^63`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModField {
    value: u64,
    modulus: u64,
}

impl ModField {
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        Self {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn one(modulus: u64) -> Self {
        Self::new(1, modulus)
    }

    pub fn add(self, o: Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        Self::new(
            ((u128::from(self.value) + u128::from(o.value)) % u128::from(self.modulus)) as u64,
            self.modulus,
        )
    }

    pub fn sub(self, o: Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        self.add(o.neg())
    }

    pub fn neg(self) -> Self {
        Self::new(self.modulus - self.value, self.modulus)
    }

    pub fn mul(self, o: Self) -> Self {
        debug_assert_eq!(self.modulus, o.modulus);
        Self::new(mul_mod(self.value, o.value, self.modulus), self.modulus)
    }

    pub fn pow(self, e: u64) -> Self {
        Self::new(pow_mod(self.value, e, self.modulus), self.modulus)
    }

    /// Inverse by Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| self.pow(self.modulus - 2))
    }

    pub fn is_one(self) -> bool {
        self.value == 1
    }
}

/// An element of exact multiplicative order `order` in a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RootOfUnity {
    pub omega: ModField,
    pub order: u64,
}

impl RootOfUnity {
    /// Checks `omega^order = 1` and `omega^(order/r) ≠ 1` for every prime
    /// `r | order`.
    pub fn verify(&self) -> bool {
        if self.order == 0 || !self.omega.pow(self.order).is_one() {
            return false;
        }
        prime_factors(self.order)
            .into_iter()
            .all(|r| !self.omega.pow(self.order / r).is_one())
    }
}

/// Finds a prime `q ≡ 1 (mod p)` in `[2^(bits-1), 2^bits)` together with a
/// root of unity of order `p` in `Z_q`.
///
/// Samples `k` and tests `q = k·p + 1`; gives up after
/// [`NTT_PRIME_CANDIDATES`] candidates. The root is `g^((q-1)/p)` for a
/// random `g`, redrawn while that power is 1.
pub fn find_ntt_prime<R: Rng + ?Sized>(
    p: u64,
    bits: u32,
    rng: &mut R,
) -> Result<(u64, RootOfUnity)> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("root order {p} is not prime")));
    }
    if !(2..=62).contains(&bits) {
        return Err(Error::InvalidArgument(format!(
            "bit size {bits} outside 2..=62"
        )));
    }
    let lo = 1u64 << (bits - 1);
    let hi = (1u64 << bits) - 1;
    let k_min = (lo - 1).div_ceil(p).max(1);
    let k_max = (hi - 1) / p;
    if k_min > k_max {
        return Err(Error::NotFound(format!(
            "no q ≡ 1 mod {p} with {bits} bits"
        )));
    }
    for _ in 0..NTT_PRIME_CANDIDATES {
        let k = rng.gen_range(k_min..=k_max);
        let q = k * p + 1;
        if !is_prime(q) {
            continue;
        }
        let cofactor = (q - 1) / p;
        for _ in 0..64 {
            let g = ModField::new(rng.gen_range(1..q), q);
            let omega = g.pow(cofactor);
            if !omega.is_one() {
                return Ok((q, RootOfUnity { omega, order: p }));
            }
        }
    }
    Err(Error::NotFound(format!(
        "no NTT prime for order {p} after {NTT_PRIME_CANDIDATES} candidates"
    )))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1`), by the extended Euclidean
/// algorithm.
fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (i128::from(a % m), i128::from(m));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(i128::from(m)) as u64)
}

/// The unique integer in `[0, ∏ m_i)` congruent to every `value_i` mod `m_i`.
pub fn crt_combine(residues: &[(u64, u64)]) -> Result<BigUint> {
    for (i, &(_, mi)) in residues.iter().enumerate() {
        if mi == 0 {
            return Err(Error::InvalidArgument("zero modulus".into()));
        }
        for &(_, mj) in &residues[i + 1..] {
            if gcd(mi, mj) != 1 {
                return Err(Error::NotCoprime(mi, mj));
            }
        }
    }
    let mut x = BigUint::zero();
    let mut modulus = BigUint::from(1u8);
    for &(v, m) in residues {
        let v = v % m;
        let x_mod = (&x % m).iter_u64_digits().next().unwrap_or(0);
        let big_mod = (&modulus % m).iter_u64_digits().next().unwrap_or(0);
        let inv = inv_mod(big_mod, m).expect("coprime moduli");
        let delta = (v + m - x_mod) % m;
        let k = mul_mod(delta, inv, m);
        x += &modulus * k;
        modulus *= m;
    }
    Ok(x)
}

/// Montgomery arithmetic modulo an odd `q < 2^63`, for hot loops.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Montgomery {
    q: u64,
    neg_q_inv: u64,
    r2: u64,
}

impl Montgomery {
    pub(crate) fn new(q: u64) -> Self {
        debug_assert!(q % 2 == 1 && q < (1 << 63));
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(q.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % u128::from(q)) as u64;
        let r2 = mul_mod(r, r, q);
        Self {
            q,
            neg_q_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    pub(crate) fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_q_inv);
        let u = ((t + u128::from(m) * u128::from(self.q)) >> 64) as u64;
        if u >= self.q {
            u - self.q
        } else {
            u
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(u128::from(a) * u128::from(b))
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.q {
            s - self.q
        } else {
            s
        }
    }

    pub(crate) fn to_mont(&self, a: u64) -> u64 {
        self.mul(a % self.q, self.r2)
    }

    pub(crate) fn from_mont(&self, a: u64) -> u64 {
        self.reduce(u128::from(a))
    }

    pub(crate) fn one(&self) -> u64 {
        self.to_mont(1)
    }

    pub(crate) fn pow(&self, base: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn trial_division(u: u64) -> bool {
        if u < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= u {
            if u.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    #[test]
    fn small_values() {
        assert!(is_prime(2));
        assert!(!is_prime(55));
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        for u in 0..5000 {
            assert_eq!(is_prime(u), trial_division(u), "u = {u}");
        }
    }

    #[test]
    fn mersenne_61() {
        let m61 = (1u64 << 61) - 1;
        assert!(trial_division(m61));
        assert!(is_prime(m61));
        assert!(!is_prime((1u64 << 61) + 1));
    }

    #[test]
    fn strong_pseudoprimes_are_rejected() {
        // Strong pseudoprimes to several small bases.
        for n in [2047u64, 3_215_031_751, 3_825_123_056_546_413_051] {
            assert!(!is_prime(n), "{n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557)); // largest 64-bit prime
    }

    #[test]
    fn prime_counting_lower_bound() {
        let sieve = primes_up_to(5000);
        for u in 56..=5000u64 {
            let count = sieve.partition_point(|&p| p <= u) as f64;
            let bound = u as f64 / ((u as f64).ln() + 2.0);
            assert!(count >= bound, "pi({u}) = {count} < {bound}");
        }
    }

    #[test]
    fn pickprime_outputs() {
        let mut rng = stream(1, "test-pickprime");
        for _ in 0..200 {
            if let Some(p) = pickprime(2, &mut rng) {
                assert_eq!(p, 2);
            }
            if let Some(p) = pickprime(10, &mut rng) {
                assert!([2, 3, 5, 7].contains(&p));
            }
        }
        assert_eq!(pickprime(1, &mut rng), None);
        assert_eq!(pickprime_rounds(100), 7);
    }

    #[test]
    fn pickprime_failure_rate() {
        let mut rng = stream(2, "test-pickprime-rate");
        for u in [100u64, 1000, 100_000] {
            let misses = (0..10_000).filter(|_| pickprime(u, &mut rng).is_none()).count();
            assert!(misses as f64 / 10_000.0 <= 0.39, "u={u}: {misses} misses");
        }
    }

    #[test]
    fn pickprime_is_uniform_on_success() {
        let mut rng = stream(3, "test-pickprime-uniform");
        let primes = primes_up_to(1000);
        let mut hits = vec![0u32; 1001];
        let mut successes = 0u32;
        for _ in 0..10_000 {
            if let Some(p) = pickprime(1000, &mut rng) {
                hits[p as usize] += 1;
                successes += 1;
            }
        }
        let q = 1.0 / primes.len() as f64;
        let mean = f64::from(successes) * q;
        let sigma = (f64::from(successes) * q * (1.0 - q)).sqrt();
        for &p in &primes {
            let dev = (f64::from(hits[p as usize]) - mean).abs();
            assert!(dev <= 3.0 * sigma, "prime {p}: {} hits, mean {mean:.1}", hits[p as usize]);
        }
        assert_eq!(hits.iter().sum::<u32>(), successes);
    }

    #[test]
    fn ntt_prime_for_two_is_minus_one() {
        let mut rng = stream(2, "test-ntt");
        let (q, root) = find_ntt_prime(2, 8, &mut rng).unwrap();
        assert!(is_prime(q) && q % 2 == 1);
        assert_eq!(root.omega.value(), q - 1);
    }

    #[test]
    fn ntt_prime_order_five() {
        let mut rng = stream(3, "test-ntt");
        let (q, root) = find_ntt_prime(5, 10, &mut rng).unwrap();
        assert_eq!(q % 5, 1);
        assert!(root.omega.pow(5).is_one() && !root.omega.is_one());
        assert!(root.verify());
    }

    #[test]
    fn ntt_prime_large() {
        let mut rng = stream(4, "test-ntt");
        let (q, root) = find_ntt_prime(97, 62, &mut rng).unwrap();
        assert!(q >= 1 << 61 && q % 97 == 1 && is_prime(q));
        assert!(root.verify());
    }

    #[test]
    fn ntt_prime_impossible_range() {
        let mut rng = stream(5, "test-ntt");
        assert!(matches!(
            find_ntt_prime(97, 5, &mut rng),
            Err(Error::NotFound(_))
        ));
        assert!(find_ntt_prime(4, 20, &mut rng).is_err());
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_combine(&[(1, 3), (1, 5)]).unwrap(), BigUint::from(1u8));
        let brute = (0..15).find(|x| x % 3 == 2 && x % 5 == 3).unwrap();
        assert_eq!(brute, 8);
        assert_eq!(crt_combine(&[(2, 3), (3, 5)]).unwrap(), BigUint::from(8u8));
        assert_eq!(crt_combine(&[(4, 9)]).unwrap(), BigUint::from(4u8));
        assert_eq!(crt_combine(&[(1, 4), (1, 6)]), Err(Error::NotCoprime(4, 6)));
    }

    #[test]
    fn crt_large_moduli() {
        let q1 = (1u64 << 61) - 1;
        let q2 = 2_305_843_009_213_693_951u64 - 2; // odd, coprime to q1
        assert_eq!(gcd(q1, q2), 1);
        let value = BigUint::from(3u8).pow(70);
        let r1 = (&value % q1).iter_u64_digits().next().unwrap();
        let r2 = (&value % q2).iter_u64_digits().next().unwrap();
        assert_eq!(crt_combine(&[(r1, q1), (r2, q2)]).unwrap(), value);
    }

    #[test]
    fn montgomery_matches_plain() {
        let q = (1u64 << 61) - 1;
        let m = Montgomery::new(q);
        let (a, b) = (123_456_789_012_345u64, 987_654_321_098_765u64);
        let prod = m.from_mont(m.mul(m.to_mont(a), m.to_mont(b)));
        assert_eq!(prod, mul_mod(a, b, q));
        assert_eq!(m.from_mont(m.pow(m.to_mont(3), 1000)), pow_mod(3, 1000, q));
    }
}
