use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::field::FieldModulus;

/// Seeded, splittable ChaCha20 stream.
///
/// Every randomized operation takes one of these by `&mut`; a run is replayable
/// from the `seed` it was created with. Concurrent consumers get their own
/// generator via [`SeededRng::split`] or [`SeededRng::fork`].
#[derive(Clone, Debug)]
pub struct SeededRng {
    seed: u64,
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Child generator seeded from this stream; advances `self`.
    pub fn split(&mut self) -> Self {
        Self::new(self.inner.next_u64())
    }

    /// Child generator derived from the root seed and a label, without
    /// touching this stream. Distinct labels give independent streams.
    pub fn fork(&self, label: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(self.seed);
        inner.set_stream(label.wrapping_add(1));
        let seed = inner.next_u64();
        Self::new(seed)
    }

    pub fn field_value(&mut self, modulus: FieldModulus) -> u64 {
        self.inner.random_range(0..modulus.value())
    }

    pub fn index(&mut self, bound: usize) -> usize {
        self.inner.random_range(0..bound)
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
