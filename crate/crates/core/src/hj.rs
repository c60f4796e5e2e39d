//! Hirzebruch–Jung continued fractions `n/q = [a_1, ..., a_r]` with
//! `[a, ...] = a - 1/[...]`.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HjError {
    #[error("need n > q > 0 with gcd(n, q) = 1, got n={n} q={q}")]
    BadArguments { n: i64, q: i64 },
    #[error("d={d} is outside [0, {n})")]
    OutOfRange { d: i64, n: i64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HJExpansion {
    pub n: i64,
    pub q: i64,
    /// `a_1 .. a_r`
    pub a: Vec<i64>,
    /// `i_0 .. i_{r+1}`
    pub i_seq: Vec<i64>,
}

impl HJExpansion {
    pub fn r(&self) -> usize {
        self.a.len()
    }

    /// `a_j` with the zero extension outside `1..=r`.
    pub fn a_at(&self, j: i64) -> i64 {
        if j >= 1 && j as usize <= self.a.len() {
            self.a[j as usize - 1]
        } else {
            0
        }
    }

    pub fn i(&self, j: usize) -> i64 {
        self.i_seq[j]
    }
}

pub fn hj_expand(n: i64, q: i64) -> Result<HJExpansion, HjError> {
    if !(n > q && q > 0) || n.gcd(&q) != 1 {
        return Err(HjError::BadArguments { n, q });
    }
    let mut i_seq = vec![n, q];
    let mut a = Vec::new();
    while *i_seq.last().unwrap() != 0 {
        let len = i_seq.len();
        let (prev, cur) = (i_seq[len - 2], i_seq[len - 1]);
        let aj = Integer::div_ceil(&prev, &cur);
        a.push(aj);
        i_seq.push(aj * cur - prev);
    }
    Ok(HJExpansion { n, q, a, i_seq })
}

/// `q(s, t)` for arbitrary integer indices: `q(s,s) = 0`, `q(s,s+1) = 1`,
/// `q(s,t+1) = a_t q(s,t) - q(s,t-1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QTable {
    exp: HJExpansion,
    lo: i64,
    hi: i64,
    cache: Vec<i64>,
}

const QTABLE_MARGIN: i64 = 4;

pub fn q_table(exp: &HJExpansion) -> QTable {
    let r = exp.r() as i64;
    let lo = -QTABLE_MARGIN;
    let hi = r + 1 + QTABLE_MARGIN;
    let w = (hi - lo + 1) as usize;
    let mut cache = vec![0i64; w * w];
    for s in lo..=hi {
        let row = &mut cache[((s - lo) as usize) * w..((s - lo) as usize + 1) * w];
        // seed two neighbouring columns, then run the t-recursion both ways
        let (a, b) = ((s.clamp(lo, hi - 1) - lo) as usize, (s.clamp(lo, hi - 1) - lo) as usize + 1);
        row[a] = q_direct(exp, s, a as i64 + lo);
        row[b] = q_direct(exp, s, b as i64 + lo);
        for k in b + 1..w {
            let t = k as i64 + lo - 1;
            row[k] = exp.a_at(t) * row[k - 1] - row[k - 2];
        }
        for k in (0..a).rev() {
            // q(s,t-1) = a_t q(s,t) - q(s,t+1)
            let t = k as i64 + lo + 1;
            row[k] = exp.a_at(t) * row[k + 1] - row[k + 2];
        }
    }
    QTable { exp: exp.clone(), lo, hi, cache }
}

fn q_direct(exp: &HJExpansion, s: i64, t: i64) -> i64 {
    if t >= s {
        // (q(s,k-1), q(s,k)) walking upward from k = s
        let (mut prev, mut cur) = (-1i64, 0i64);
        for k in s..t {
            let next = exp.a_at(k) * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        // q(s,k-1) = a_k q(s,k) - q(s,k+1)
        let (mut above, mut cur) = (1i64, 0i64);
        for k in (t + 1..=s).rev() {
            let next = exp.a_at(k) * cur - above;
            above = cur;
            cur = next;
        }
        cur
    }
}

impl QTable {
    pub fn expansion(&self) -> &HJExpansion {
        &self.exp
    }

    pub fn q(&self, s: i64, t: i64) -> i64 {
        if s >= self.lo && s <= self.hi && t >= self.lo && t <= self.hi {
            let w = (self.hi - self.lo + 1) as usize;
            self.cache[((s - self.lo) as usize) * w + (t - self.lo) as usize]
        } else {
            q_direct(&self.exp, s, t)
        }
    }
}

/// Greedy digits `d_1 .. d_r` with `d = Σ i_t d_t`.
pub fn d_expansion(d: i64, exp: &HJExpansion) -> Result<Vec<i64>, HjError> {
    if d < 0 || d >= exp.n {
        return Err(HjError::OutOfRange { d, n: exp.n });
    }
    let mut rem = d;
    let mut out = Vec::with_capacity(exp.r());
    for t in 1..=exp.r() {
        let it = exp.i(t);
        out.push(rem / it);
        rem %= it;
    }
    debug_assert_eq!(rem, 0);
    Ok(out)
}

/// `c_j = Σ_{t=1}^{j-1} q(t,j) d_t` for `j = 0 ..= r+1`.
pub fn c_values(dexp: &[i64], table: &QTable) -> Vec<i64> {
    let r = table.exp.r();
    assert_eq!(dexp.len(), r, "digit list length must equal r");
    (0..=r + 1).map(|j| (1..j).map(|t| table.q(t as i64, j as i64) * dexp[t - 1]).sum()).collect()
}

/// `[a_1, ..., a_r]` as an exact fraction `(num, den)`.
pub fn evaluate(a: &[i64]) -> (i64, i64) {
    let (mut num, mut den) = (1i64, 0i64);
    for &x in a.iter().rev() {
        // x - den/num
        let n2 = x * num - den;
        den = num;
        num = n2;
    }
    (num, den)
}

/// The digit conditions on a greedy expansion: `0 <= d_t <= a_t - 1`, and
/// between two digits `d_s = a_s - 1`, `d_t = a_t - 1` some digit lies at
/// most `a_u - 3`.
pub fn digits_admissible(dexp: &[i64], exp: &HJExpansion) -> bool {
    let a = &exp.a;
    if dexp.iter().zip(a).any(|(&d, &a)| d < 0 || d > a - 1) {
        return false;
    }
    let mut open = false;
    for (&d, &a) in dexp.iter().zip(a) {
        if d == a - 1 {
            if open {
                return false;
            }
            open = true;
        } else if d <= a - 3 {
            open = false;
        }
    }
    true
}
