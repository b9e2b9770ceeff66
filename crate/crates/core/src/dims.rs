//! Mod-8 sign and dimension arithmetic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The mod-8 periodic sign `a(n) = (-1)^{n(n+2)/8}` on even integers.
pub fn sign_a(n: i64) -> Result<i8> {
    if n.rem_euclid(2) != 0 {
        return Err(Error::OddInteger(n));
    }
    Ok(match n.rem_euclid(8) {
        0 | 6 => 1,
        _ => -1,
    })
}

/// `(-1)^k` for any integer `k`.
pub fn parity_sign(k: i64) -> i8 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// An even residue mod 8, stored canonically in `{0, 2, 4, 6}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "i64")]
pub struct Mod8Dim(u8);

impl Mod8Dim {
    pub fn new(n: i64) -> Result<Self> {
        if n.rem_euclid(2) != 0 {
            return Err(Error::OddInteger(n));
        }
        Ok(Self(n.rem_euclid(8) as u8))
    }

    pub fn value(self) -> i64 {
        i64::from(self.0)
    }

    pub fn all() -> [Mod8Dim; 4] {
        [Self(0), Self(2), Self(4), Self(6)]
    }
}

impl std::ops::Add for Mod8Dim {
    type Output = Mod8Dim;
    fn add(self, rhs: Self) -> Self {
        Self((self.0 + rhs.0) % 8)
    }
}

impl TryFrom<i64> for Mod8Dim {
    type Error = Error;
    fn try_from(n: i64) -> Result<Self> {
        Self::new(n)
    }
}

impl From<Mod8Dim> for i64 {
    fn from(d: Mod8Dim) -> i64 {
        d.value()
    }
}

impl std::fmt::Display for Mod8Dim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The four signs `(ε, ε″, κ, κ″)` of an indefinite spectral triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SignQuadruple {
    pub eps: i8,
    pub eps2: i8,
    pub kap: i8,
    pub kap2: i8,
}

impl SignQuadruple {
    pub fn new(eps: i8, eps2: i8, kap: i8, kap2: i8) -> Result<Self> {
        for (name, v) in [("eps", eps), ("eps2", eps2), ("kap", kap), ("kap2", kap2)] {
            if v != 1 && v != -1 {
                return Err(Error::InvalidInput(format!("{name} must be +1 or -1, got {v}")));
            }
        }
        Ok(Self { eps, eps2, kap, kap2 })
    }

    /// The parity `σ` of the Krein product, read off from `κ″ = (-1)^σ ε″`.
    pub fn sigma(&self) -> u8 {
        if self.kap2 == self.eps2 {
            0
        } else {
            1
        }
    }
}

/// Signs determined by a pair of dimensions: `ε = a(n)`, `ε″ = (-1)^{n/2}`,
/// `κ = a(m)`, `κ″ = (-1)^{m/2}`.
pub fn signs_from_dims(n: Mod8Dim, m: Mod8Dim) -> SignQuadruple {
    let (n, m) = (n.value(), m.value());
    SignQuadruple {
        eps: sign_a(n).expect("even by construction"),
        eps2: parity_sign(n / 2),
        kap: sign_a(m).expect("even by construction"),
        kap2: parity_sign(m / 2),
    }
}

fn dim_from_pair(a: i8, parity: i8) -> Mod8Dim {
    // (a(n), (-1)^{n/2}) over n = 0,2,4,6 is (+,+), (-,-), (-,+), (+,-): a bijection.
    let n = match (a, parity) {
        (1, 1) => 0,
        (-1, -1) => 2,
        (-1, 1) => 4,
        _ => 6,
    };
    Mod8Dim(n)
}

/// KO-dimension `n` and metric dimension `m` from the sign quadruple.
pub fn dims_from_signs(q: SignQuadruple) -> (Mod8Dim, Mod8Dim) {
    (dim_from_pair(q.eps, q.eps2), dim_from_pair(q.kap, q.kap2))
}

/// Numbers of time and space dimensions, mod 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SpaceTimePair {
    pub t: u8,
    pub s: u8,
}

impl SpaceTimePair {
    pub fn new(t: i64, s: i64) -> Result<Self> {
        if (t - s).rem_euclid(2) != 0 {
            return Err(Error::InvalidInput(format!("t={t} and s={s} have different parity")));
        }
        Ok(Self { t: t.rem_euclid(8) as u8, s: s.rem_euclid(8) as u8 })
    }
}

/// The two residue classes of `(t, s)` with `t - s ≡ n` and `t + s ≡ m` mod 8.
///
/// The first pair is `((m+n)/2, (m-n)/2)` with `m, n` taken in `{0,2,4,6}`;
/// the second adds 4 to both entries.
pub fn spacetime_pairs(n: Mod8Dim, m: Mod8Dim) -> [SpaceTimePair; 2] {
    let (n, m) = (n.value(), m.value());
    let t = (m + n) / 2;
    let s = (m - n) / 2;
    [
        SpaceTimePair { t: t.rem_euclid(8) as u8, s: s.rem_euclid(8) as u8 },
        SpaceTimePair { t: (t + 4).rem_euclid(8) as u8, s: (s + 4).rem_euclid(8) as u8 },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cardinal {
    East,
    West,
    South,
    North,
}

impl Cardinal {
    pub const ALL: [Cardinal; 4] = [Cardinal::East, Cardinal::West, Cardinal::South, Cardinal::North];

    pub fn name(self) -> &'static str {
        match self {
            Cardinal::East => "East",
            Cardinal::West => "West",
            Cardinal::South => "South",
            Cardinal::North => "North",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalRow {
    pub convention: Cardinal,
    pub m: Mod8Dim,
    pub n: Mod8Dim,
    pub ts: SpaceTimePair,
    /// Negative numbers of space or time dimensions were reduced mod 8.
    pub unphysical: bool,
}

/// Metric dimension, KO-dimension and `(t, s)` of a Clifford module of
/// signature `(q, p)` under each of the four sign conventions.
pub fn cardinal_table(q: u32, p: u32) -> Result<[CardinalRow; 4]> {
    if (q + p) % 2 != 0 {
        return Err(Error::InvalidInput(format!(
            "total dimension q+p={} must be even",
            q + p
        )));
    }
    let (q, p) = (i64::from(q), i64::from(p));
    let row = |convention, m: i64, n: i64, t: i64, s: i64, unphysical| -> Result<CardinalRow> {
        Ok(CardinalRow {
            convention,
            m: Mod8Dim::new(m)?,
            n: Mod8Dim::new(n)?,
            ts: SpaceTimePair::new(t, s)?,
            unphysical,
        })
    };
    Ok([
        row(Cardinal::East, p + q, q - p, q, p, false)?,
        row(Cardinal::West, p + q, p - q, p, q, false)?,
        row(Cardinal::South, -p - q, q - p, -p, -q, true)?,
        row(Cardinal::North, -p - q, p - q, -q, -p, true)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn a_table_values() {
        assert_eq!(sign_a(0).unwrap(), 1);
        assert_eq!(sign_a(2).unwrap(), -1);
        assert_eq!(sign_a(-2).unwrap(), 1);
        assert_eq!(sign_a(4).unwrap(), -1);
        assert_eq!(sign_a(6).unwrap(), 1);
        assert_eq!(sign_a(10).unwrap(), -1);
    }

    #[test]
    fn a_rejects_odd() {
        let err = sign_a(3).unwrap_err();
        assert!(err.to_string().contains("a defined on even integers only"));
    }

    #[test]
    fn a_matches_closed_exponent() {
        for n in (-40i64..=40).step_by(2) {
            let e = n * (n + 2) / 8;
            assert_eq!(sign_a(n).unwrap(), parity_sign(e), "n={n}");
        }
    }

    #[test]
    fn a_product_identity_over_a_period() {
        for m in (0i64..16).step_by(2) {
            for n in (0i64..16).step_by(2) {
                let lhs = sign_a(m + n).unwrap() * sign_a(m - n).unwrap();
                assert_eq!(lhs, parity_sign((m + 1) * n / 2), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn dims_from_signs_examples() {
        let f = |e, e2, k, k2| dims_from_signs(SignQuadruple::new(e, e2, k, k2).unwrap());
        assert_eq!(f(1, 1, 1, 1), (Mod8Dim(0), Mod8Dim(0)));
        assert_eq!(f(-1, -1, 1, -1), (Mod8Dim(2), Mod8Dim(6)));
        assert_eq!(f(1, 1, -1, 1), (Mod8Dim(0), Mod8Dim(4)));
    }

    #[test]
    fn dims_round_trip() {
        for n in Mod8Dim::all() {
            for m in Mod8Dim::all() {
                assert_eq!(dims_from_signs(signs_from_dims(n, m)), (n, m));
            }
        }
    }

    #[test]
    fn spacetime_examples() {
        let p = |t, s| SpaceTimePair { t, s };
        let d = |v| Mod8Dim::new(v).unwrap();
        assert_eq!(spacetime_pairs(d(0), d(0)), [p(0, 0), p(4, 4)]);
        assert_eq!(spacetime_pairs(d(6), d(2)), [p(4, 6), p(0, 2)]);
        assert_eq!(spacetime_pairs(d(4), d(4)), [p(4, 0), p(0, 4)]);
    }

    #[test]
    fn cardinal_examples() {
        let rows = cardinal_table(3, 1).unwrap();
        assert_eq!((rows[0].m.value(), rows[0].n.value(), rows[0].ts), (4, 2, SpaceTimePair { t: 3, s: 1 }));
        assert_eq!((rows[1].m.value(), rows[1].n.value(), rows[1].ts), (4, 6, SpaceTimePair { t: 1, s: 3 }));
        assert!(rows[2].unphysical && rows[3].unphysical);
        for r in cardinal_table(0, 0).unwrap() {
            assert_eq!((r.m.value(), r.n.value(), r.ts), (0, 0, SpaceTimePair { t: 0, s: 0 }));
        }
        assert!(cardinal_table(2, 1).is_err());
    }

    proptest! {
        #[test]
        fn a_shift_and_reflection(k in -1000i64..1000) {
            let n = 2 * k;
            prop_assert_eq!(sign_a(n + 4).unwrap(), -sign_a(n).unwrap());
            prop_assert_eq!(sign_a(-n).unwrap(), parity_sign(n / 2) * sign_a(n).unwrap());
            prop_assert_eq!(sign_a(n + 8).unwrap(), sign_a(n).unwrap());
        }

        #[test]
        fn spacetime_pairs_solve_the_congruences(n in 0i64..4, m in 0i64..4) {
            let (n, m) = (Mod8Dim::new(2 * n).unwrap(), Mod8Dim::new(2 * m).unwrap());
            let pairs = spacetime_pairs(n, m);
            prop_assert_ne!(pairs[0], pairs[1]);
            for st in pairs {
                let (t, s) = (i64::from(st.t), i64::from(st.s));
                prop_assert_eq!((t - s).rem_euclid(8), n.value());
                prop_assert_eq!((t + s).rem_euclid(8), m.value());
                prop_assert_eq!((t - s).rem_euclid(2), 0);
            }
        }

        #[test]
        fn cardinal_rows_are_consistent(q in 0u32..20, p in 0u32..20) {
            prop_assume!((q + p) % 2 == 0);
            for r in cardinal_table(q, p).unwrap() {
                let (t, s) = (i64::from(r.ts.t), i64::from(r.ts.s));
                prop_assert_eq!((t - s).rem_euclid(8), r.n.value());
                prop_assert_eq!((t + s).rem_euclid(8), r.m.value());
            }
        }
    }
}
