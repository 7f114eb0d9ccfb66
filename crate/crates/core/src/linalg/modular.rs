use std::ops::Range;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::Rng;

use super::{exact::rank_exact, IntMatrix, RankMethod, RankResult};

/// Random primes are drawn from this interval.
pub const PRIME_RANGE: Range<u64> = (1 << 50)..(1 << 62);

const PRIMES_PER_CALL: usize = 3;

/// Below this many stored entries the three primes run sequentially.
const PARALLEL_NNZ: usize = 20_000;

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Three distinct primes drawn uniformly from [`PRIME_RANGE`].
pub fn draw_primes<R: Rng + ?Sized>(rng: &mut R) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(PRIMES_PER_CALL);
    while out.len() < PRIMES_PER_CALL {
        let candidate = rng.gen_range(PRIME_RANGE) | 1;
        if PRIME_RANGE.contains(&candidate) && is_prime_u64(candidate) && !out.contains(&candidate) {
            out.push(candidate);
        }
    }
    out
}

/// Montgomery arithmetic modulo an odd `p < 2^62`, with `R = 2^64`.
#[derive(Clone, Copy)]
struct Montgomery {
    p: u64,
    /// `-p⁻¹ mod 2^64`
    neg_inv: u64,
    /// `R² mod p`
    r2: u64,
}

impl Montgomery {
    fn new(p: u64) -> Self {
        assert!(p % 2 == 1 && p < (1 << 62));
        let mut inv: u64 = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        Montgomery {
            p,
            neg_inv: inv.wrapping_neg(),
            r2: mul_mod(r, r, p),
        }
    }

    #[inline(always)]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    #[inline(always)]
    fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    #[inline(always)]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn enter(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    fn leave(&self, x: u64) -> u64 {
        self.redc(x as u128)
    }

    fn inv(&self, x: u64) -> u64 {
        let plain = self.leave(x);
        self.enter(pow_mod(plain, self.p - 2, self.p))
    }

    fn reduce_big(&self, x: &BigInt) -> u64 {
        let plain = match x.to_i64() {
            Some(v) => v.rem_euclid(self.p as i64) as u64,
            None => x
                .mod_floor(&BigInt::from(self.p))
                .to_u64()
                .expect("residue below p"),
        };
        self.enter(plain)
    }
}

/// Rank of `m` over `Z/pZ` for an odd prime `p < 2^62`.
///
/// Rows are reduced one at a time against normalized pivot rows; a pivot row
/// for column `j` stores only its entries from column `j` onward.
pub fn rank_mod_prime(m: &IntMatrix, p: u64) -> usize {
    let mont = Montgomery::new(p);
    let cols = m.cols();
    let mut pivots: Vec<Option<Vec<u64>>> = vec![None; cols];
    let mut rank = 0;
    let mut buf = vec![0u64; cols];
    for r in 0..m.rows() {
        if rank == cols {
            break;
        }
        buf.iter_mut().for_each(|x| *x = 0);
        for (c, x) in m.row(r) {
            buf[*c] = mont.reduce_big(x);
        }
        let mut j = match m.row(r).first() {
            Some((c, _)) => *c,
            None => continue,
        };
        while j < cols {
            let f = buf[j];
            if f == 0 {
                j += 1;
                continue;
            }
            match &pivots[j] {
                Some(tail) => {
                    let dst = &mut buf[j..];
                    for (d, &s) in dst.iter_mut().zip(tail.iter()).skip(1) {
                        if s != 0 {
                            *d = mont.sub(*d, mont.mul(f, s));
                        }
                    }
                    buf[j] = 0;
                    j += 1;
                }
                None => {
                    let inv = mont.inv(f);
                    pivots[j] = Some(buf[j..].iter().map(|&x| mont.mul(x, inv)).collect());
                    rank += 1;
                    break;
                }
            }
        }
    }
    rank
}

/// Rank via three random primes, escalating to [`rank_exact`] when the
/// modular ranks disagree.
pub fn rank_modular(m: &IntMatrix) -> RankResult {
    let primes = draw_primes(&mut rand::thread_rng());
    rank_modular_with_primes(m, &primes)
}

/// As [`rank_modular`] with caller-supplied primes.
pub fn rank_modular_with_primes(m: &IntMatrix, primes: &[u64]) -> RankResult {
    let start = Instant::now();
    let ranks: Vec<usize> = if m.nnz() < PARALLEL_NNZ {
        primes.iter().map(|&p| rank_mod_prime(m, p)).collect()
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = primes
                .iter()
                .map(|&p| s.spawn(move || rank_mod_prime(m, p)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("rank worker panicked"))
                .collect()
        })
    };
    let agreed = ranks.first().filter(|&&r0| ranks.iter().all(|&r| r == r0));
    match agreed {
        Some(&rank) => RankResult {
            rank,
            method: RankMethod::Modular,
            primes_used: primes.to_vec(),
            elapsed: start.elapsed(),
        },
        None => {
            let exact = rank_exact(m);
            RankResult {
                rank: exact.rank,
                method: RankMethod::Exact,
                primes_used: primes.to_vec(),
                elapsed: start.elapsed(),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..50).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]);
        assert!(is_prime_u64((1 << 61) - 1));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime_u64(((1u64 << 31) - 1) * ((1 << 31) - 1)));
    }

    #[test]
    fn drawn_primes_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ps = draw_primes(&mut rng);
        assert_eq!(ps.len(), 3);
        for p in ps {
            assert!(PRIME_RANGE.contains(&p) && is_prime_u64(p));
        }
    }

    #[test]
    fn montgomery_matches_plain() {
        let p = (1u64 << 61) - 1;
        let mont = Montgomery::new(p);
        for (a, b) in [(3u64, 5u64), (p - 1, p - 2), (123_456_789_012, 987_654_321_098)] {
            let got = mont.leave(mont.mul(mont.enter(a), mont.enter(b)));
            assert_eq!(got, mul_mod(a, b, p));
        }
        let x = mont.enter(42);
        assert_eq!(mont.leave(mont.mul(x, mont.inv(x))), 1);
        assert_eq!(mont.leave(mont.reduce_big(&BigInt::from(-1))), p - 1);
    }

    #[test]
    fn rank_over_small_prime() {
        let m = IntMatrix::from_rows(&[vec![3i64, 0], vec![0, 5]]);
        assert_eq!(rank_mod_prime(&m, 3), 1);
        assert_eq!(rank_mod_prime(&m, 7), 2);
    }

    #[test]
    fn identity_rank() {
        let r = rank_modular(&IntMatrix::identity(5));
        assert_eq!(r.rank, 5);
        assert_eq!(r.method, RankMethod::Modular);
        assert_eq!(r.primes_used.len(), 3);
    }

    #[test]
    fn planted_prime_escalates() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let primes = draw_primes(&mut rng);
        let p = primes[0];
        let m = IntMatrix::from_rows(&[vec![BigInt::from(p), BigInt::from(0)], vec![BigInt::from(0), BigInt::from(p)]]);
        let r = rank_modular_with_primes(&m, &primes);
        assert_eq!(r.rank, 2);
        assert_eq!(r.method, RankMethod::Exact);
    }
}
