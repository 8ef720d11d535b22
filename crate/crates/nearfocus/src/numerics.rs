//! Small numeric helpers shared across the crate: compensated summation and
//! deterministic seed derivation for independent random substreams.

/// Neumaier-compensated accumulator.
///
/// Keeps a running correction term that captures the low-order bits lost when
/// terms of very different magnitude meet, so long sums stay accurate to a few
/// ulps regardless of length. Used for every phasor sum in the crate so that
/// results are reproducible and do not drift with panel size.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    /// Creates an empty accumulator.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds one term.
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    /// Returns the compensated total.
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl Extend<f64> for NeumaierSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for v in iter {
            self.add(v);
        }
    }
}

/// Sums an iterator with Neumaier compensation.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = NeumaierSum::new();
    acc.extend(values);
    acc.value()
}

/// Derives a seed for substream `index` from a master seed.
///
/// Uses the splitmix64 finalizer over the master seed xored with a
/// golden-ratio stride, which decorrelates consecutive indices well enough
/// for independent ChaCha streams. Deterministic by construction: the same
/// `(master, index)` pair always yields the same seed.
pub fn substream_seed(master: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = (master ^ index.wrapping_mul(GOLDEN)).wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
