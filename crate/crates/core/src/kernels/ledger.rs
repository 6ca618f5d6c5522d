use std::ops::{Add, AddAssign};

/// Operation counts by category. Every category costs one flop.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Ops {
    pub add: u64,
    pub mul: u64,
    pub div: u64,
    pub sqrt: u64,
    pub transcendental: u64,
}

impl Ops {
    pub const fn new(add: u64, mul: u64, div: u64, sqrt: u64, transcendental: u64) -> Self {
        Ops {
            add,
            mul,
            div,
            sqrt,
            transcendental,
        }
    }

    pub const fn total(&self) -> u64 {
        self.add + self.mul + self.div + self.sqrt + self.transcendental
    }

    pub const fn times(self, n: u64) -> Ops {
        Ops {
            add: self.add * n,
            mul: self.mul * n,
            div: self.div * n,
            sqrt: self.sqrt * n,
            transcendental: self.transcendental * n,
        }
    }
}

impl Add for Ops {
    type Output = Ops;
    fn add(self, o: Ops) -> Ops {
        Ops {
            add: self.add + o.add,
            mul: self.mul + o.mul,
            div: self.div + o.div,
            sqrt: self.sqrt + o.sqrt,
            transcendental: self.transcendental + o.transcendental,
        }
    }
}

impl AddAssign for Ops {
    fn add_assign(&mut self, o: Ops) {
        *self = *self + o;
    }
}

/// Running arithmetic-operation tally.
///
/// Counters only ever grow. Workers each own a ledger and merge them by
/// componentwise addition, so totals do not depend on scheduling.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlopLedger {
    ops: Ops,
    near_field_fallbacks: u64,
}

impl FlopLedger {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn charge(&mut self, ops: Ops) {
        self.ops += ops;
    }

    /// Closed-form charges (dense factorizations etc.) booked as
    /// additions and multiplications in equal parts.
    pub fn charge_flops(&mut self, flops: u64) {
        let mul = flops / 2;
        self.ops.mul += mul;
        self.ops.add += flops - mul;
    }

    pub(crate) fn note_fallback(&mut self) {
        self.near_field_fallbacks += 1;
    }

    pub fn ops(&self) -> Ops {
        self.ops
    }

    pub fn additions(&self) -> u64 {
        self.ops.add
    }

    pub fn multiplications(&self) -> u64 {
        self.ops.mul
    }

    pub fn divisions(&self) -> u64 {
        self.ops.div
    }

    pub fn square_roots(&self) -> u64 {
        self.ops.sqrt
    }

    pub fn transcendentals(&self) -> u64 {
        self.ops.transcendental
    }

    /// Number of near-field special cases taken by the single-layer integral.
    pub fn near_field_fallbacks(&self) -> u64 {
        self.near_field_fallbacks
    }

    pub fn total(&self) -> u64 {
        self.ops.total()
    }

    pub fn merge(&mut self, other: &FlopLedger) {
        self.ops += other.ops;
        self.near_field_fallbacks += other.near_field_fallbacks;
    }
}

impl Add for FlopLedger {
    type Output = FlopLedger;
    fn add(mut self, o: FlopLedger) -> FlopLedger {
        self.merge(&o);
        self
    }
}

impl AddAssign for FlopLedger {
    fn add_assign(&mut self, o: FlopLedger) {
        self.merge(&o);
    }
}
