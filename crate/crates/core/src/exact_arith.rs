//! Exact rationals, classical Bernoulli numbers and the two-index
//! extended Bernoulli family `C_mn`.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds `n/d` from machine integers.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` as a rational.
pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    Rational::from_integer(acc)
}

/// Binomial coefficient as a rational.
pub fn binom(n: usize, k: usize) -> Rational {
    if k > n {
        return Rational::zero();
    }
    Rational::from_integer(binomial(BigInt::from(n), BigInt::from(k)))
}

/// Renders a rational as `p/q`, or `p` when `q = 1`.
pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q` or `p`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    s.trim().parse::<Rational>().ok()
}

/// Memoized table of Bernoulli numbers with `B_1 = -1/2`.
#[derive(Clone, Debug)]
pub struct BernoulliTable {
    values: Vec<Rational>,
}

impl Default for BernoulliTable {
    fn default() -> Self {
        Self::new()
    }
}

impl BernoulliTable {
    pub fn new() -> Self {
        BernoulliTable { values: vec![Rational::one()] }
    }

    /// Largest index currently stored.
    pub fn computed_up_to(&self) -> usize {
        self.values.len() - 1
    }

    /// Grows the table so that `B_n` is available.
    pub fn extend_to(&mut self, n: usize) {
        while self.values.len() <= n {
            let m = self.values.len();
            if m >= 3 && m % 2 == 1 {
                self.values.push(Rational::zero());
                continue;
            }
            // sum_{k=0}^{m} C(m+1,k) B_k = 0
            let mut s = Rational::zero();
            for (k, b) in self.values.iter().enumerate() {
                if !b.is_zero() {
                    s += binom(m + 1, k) * b;
                }
            }
            self.values.push(-s / int(m as i64 + 1));
        }
    }

    pub fn get(&mut self, n: usize) -> Rational {
        self.extend_to(n);
        self.values[n].clone()
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }
}

fn global_bernoulli() -> &'static Mutex<BernoulliTable> {
    static TABLE: OnceLock<Mutex<BernoulliTable>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(BernoulliTable::new()))
}

/// `B_n` from `x/(e^x - 1)`.
pub fn bernoulli(n: usize) -> Rational {
    global_bernoulli().lock().expect("bernoulli cache poisoned").get(n)
}

/// The first `n + 1` Bernoulli numbers `B_0..=B_n`.
pub fn bernoulli_vec(n: usize) -> Vec<Rational> {
    let mut t = global_bernoulli().lock().expect("bernoulli cache poisoned");
    t.extend_to(n);
    t.values()[..=n].to_vec()
}

/// The three classical linear identities satisfied by Bernoulli numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BernoulliIdentity {
    /// `sum_{n=1}^m C(m+1,n) B_n = -1`
    A,
    /// `sum_{k=1}^{m/2} C(m+1,2k) B_{2k} = (m-1)/2`
    B,
    /// `sum_{n=1}^m (-1)^n C(m+1,n) B_n = m`
    C,
}

/// Checks one of the identities at `m >= 1` exactly.
pub fn check_bernoulli_identity(m: usize, variant: BernoulliIdentity) -> bool {
    if m == 0 {
        return false;
    }
    let b = bernoulli_vec(m + 1);
    match variant {
        BernoulliIdentity::A => {
            let s: Rational = (1..=m).map(|n| binom(m + 1, n) * &b[n]).sum();
            s == int(-1)
        }
        BernoulliIdentity::B => {
            let s: Rational = (1..=m / 2).map(|k| binom(m + 1, 2 * k) * &b[2 * k]).sum();
            s == rat(m as i64 - 1, 2)
        }
        BernoulliIdentity::C => {
            let s: Rational = (1..=m)
                .map(|n| {
                    let t = binom(m + 1, n) * &b[n];
                    if n % 2 == 1 {
                        -t
                    } else {
                        t
                    }
                })
                .sum();
            s == int(m as i64)
        }
    }
}

/// Which seed the two-index recursion starts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtVariant {
    /// `C_{1n} = B_n`
    Standard,
    /// `C'_{11} = 1/2`, `C'_{1n} = B_n` for `n >= 2`
    Primed,
}

/// Table of `C_mn` for `m + n <= max_weight`, built by the recursion.
#[derive(Clone, Debug)]
pub struct ExtBernoulliTable {
    entries: BTreeMap<(usize, usize), Rational>,
    max_weight: usize,
    variant: ExtVariant,
}

impl ExtBernoulliTable {
    pub fn new(max_weight: usize) -> Self {
        Self::with_variant(max_weight, ExtVariant::Standard)
    }

    pub fn primed(max_weight: usize) -> Self {
        Self::with_variant(max_weight, ExtVariant::Primed)
    }

    pub fn with_variant(max_weight: usize, variant: ExtVariant) -> Self {
        let b = bernoulli_vec(max_weight + 1);
        let seed = |n: usize| -> Rational {
            if variant == ExtVariant::Primed && n == 1 {
                rat(1, 2)
            } else {
                b[n].clone()
            }
        };
        let mut entries = BTreeMap::new();
        for n in 1..max_weight {
            entries.insert((1, n), seed(n));
        }
        // Row m+1 needs row m up to column n+1, i.e. the same weight.
        for m in 1..max_weight {
            for n in 1..max_weight.saturating_sub(m) {
                let mut s = rat(n as i64, n as i64 + 1) * &entries[&(m, n + 1)];
                let mut tail = Rational::zero();
                for k in 1..=n {
                    let bk = seed(k);
                    if bk.is_zero() {
                        continue;
                    }
                    tail += binom(n + 1, k) * bk * &entries[&(m, n - k + 1)];
                }
                s -= tail / int(n as i64 + 1);
                entries.insert((m + 1, n), s);
            }
        }
        ExtBernoulliTable { entries, max_weight, variant }
    }

    pub fn max_weight(&self) -> usize {
        self.max_weight
    }

    pub fn variant(&self) -> ExtVariant {
        self.variant
    }

    /// `C_mn`; panics outside the computed weight.
    pub fn get(&self, m: usize, n: usize) -> &Rational {
        self.entries
            .get(&(m, n))
            .unwrap_or_else(|| panic!("C_({m},{n}) outside weight {}", self.max_weight))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rational)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// `C_mn` from the recursion seeded with `C_{1n} = B_n`.
pub fn ext_bernoulli_recursive(m: usize, n: usize) -> Rational {
    ExtBernoulliTable::new(m + n).get(m, n).clone()
}

/// `C_mn = sum_{k=0}^{m-1} C(m,k) B_{n+k}`.
pub fn ext_bernoulli_closed(m: usize, n: usize) -> Rational {
    let b = bernoulli_vec(m + n);
    (0..m).map(|k| binom(m, k) * &b[n + k]).sum()
}

/// `C'_mn` from the mirrored recursion.
pub fn ext_bernoulli_prime(m: usize, n: usize) -> Rational {
    ExtBernoulliTable::primed(m + n).get(m, n).clone()
}

/// Coefficients `gamma_k` of `2x/(e^x - e^-x) = sum gamma_k x^{2k}` for `2k <= n`.
pub fn gamma_coefficients(n: usize) -> Vec<Rational> {
    let count = n / 2 + 1;
    let mut g: Vec<Rational> = Vec::with_capacity(count);
    g.push(Rational::one());
    for j in 1..count {
        let s: Rational = (1..=j).map(|k| &g[j - k] / factorial(2 * k + 1)).sum();
        g.push(-s);
    }
    g
}

/// Sign `(-1)^k` as a rational.
pub fn sign(k: usize) -> Rational {
    if k % 2 == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}
