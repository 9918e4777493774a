use crate::ConstructionError;

/// Values above this are refused.
pub const SCHEDULE_LIMIT: u64 = 1 << 62;

/// Phase schedule: `Δ_n = q^⌊√n⌋`, `T(n) = T0 + Σ_{k=1}^n Δ_k`, `K(n) = ⌈√Δ_{n+1}⌉`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Schedule {
    pub q: u64,
    pub t0: u64,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule { q: 5, t0: 2 }
    }
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

impl Schedule {
    pub fn new(q: u64) -> Result<Self, ConstructionError> {
        if q < 5 {
            return Err(ConstructionError::Invalid(format!("q must be at least 5, got {q}")));
        }
        Ok(Schedule { q, t0: 2 })
    }

    pub fn delta(&self, n: u64) -> Result<u64, ConstructionError> {
        let e = isqrt(n) as u32;
        self.q
            .checked_pow(e)
            .filter(|v| *v <= SCHEDULE_LIMIT)
            .ok_or(ConstructionError::Overflow(n))
    }

    pub fn t(&self, n: u64) -> Result<u64, ConstructionError> {
        let mut t = self.t0;
        for k in 1..=n {
            t = t
                .checked_add(self.delta(k)?)
                .filter(|v| *v <= SCHEDULE_LIMIT)
                .ok_or(ConstructionError::Overflow(n))?;
        }
        Ok(t)
    }

    pub fn k(&self, n: u64) -> Result<u64, ConstructionError> {
        let d = self.delta(n + 1)?;
        let r = isqrt(d);
        Ok(if r * r == d { r } else { r + 1 })
    }

    /// The phase at time `t`: the largest `n` with `T(n) ≤ t`, or `None` before `T(0)`.
    pub fn phase(&self, t: u64) -> Option<u64> {
        if t < self.t0 {
            return None;
        }
        let mut n = 0;
        let mut tn = self.t0;
        loop {
            let next = match self.delta(n + 1) {
                Ok(d) => tn.saturating_add(d),
                Err(_) => return Some(n),
            };
            if next > t {
                return Some(n);
            }
            tn = next;
            n += 1;
        }
    }

    /// Phase times `T(0), …, T(n)`.
    pub fn times(&self, n: u64) -> Result<Vec<u64>, ConstructionError> {
        (0..=n).map(|k| self.t(k)).collect()
    }
}

pub fn schedule_t(s: &Schedule, n: u64) -> Result<u64, ConstructionError> {
    s.t(n)
}

pub fn schedule_k(s: &Schedule, n: u64) -> Result<u64, ConstructionError> {
    s.k(n)
}
