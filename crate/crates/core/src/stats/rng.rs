//! Counter-based random streams.
//!
//! An [`RngState`] is a plain value `(seed, stream, counter)`. The seed keys a
//! ChaCha20 block function, the stream id selects its nonce and the counter
//! is the position inside that stream, measured in 64-bit words. Work that is
//! split across threads takes one child stream per task index, so results do
//! not depend on how the tasks are scheduled.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream: u64,
    pub counter: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState {
            seed,
            stream: 0,
            counter: 0,
        }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        RngState {
            seed,
            stream,
            counter: 0,
        }
    }

    /// Derives an independent stream for task `index`. Children of distinct
    /// indices (and of distinct parents) land on distinct stream ids.
    pub fn child(&self, index: u64) -> RngState {
        let mixed = splitmix64(self.stream ^ splitmix64(index ^ 0x6a09_e667_f3bc_c909))
            ^ splitmix64(self.counter.rotate_left(17));
        RngState {
            seed: self.seed,
            stream: mixed,
            counter: 0,
        }
    }

    /// Named sub-stream, for separating the roles of one run (bootstrap,
    /// posterior sampling, ...).
    pub fn substream(&self, label: &str) -> RngState {
        let h = label
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325_u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3));
        self.child(h)
    }

    pub fn advanced(&self, words: u64) -> RngState {
        RngState {
            counter: self.counter + words,
            ..*self
        }
    }

    /// Opens the stream at this state's position.
    pub fn stream(&self) -> Stream {
        let mut key = [0u8; 32];
        let mut s = self.seed;
        for chunk in key.chunks_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        let mut inner = ChaCha20Rng::from_seed(key);
        inner.set_stream(self.stream);
        inner.set_word_pos(u128::from(self.counter) * 2);
        Stream {
            inner,
            state: *self,
            spare_normal: None,
        }
    }
}

/// A positioned generator. Tracks how many words it has consumed so the
/// equivalent [`RngState`] can be recovered.
#[derive(Debug, Clone)]
pub struct Stream {
    inner: ChaCha20Rng,
    state: RngState,
    spare_normal: Option<f64>,
}

impl Stream {
    /// State that would reproduce the next output of this stream (ignoring a
    /// cached spare normal deviate).
    pub fn state(&self) -> RngState {
        self.state
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state.counter += 1;
        self.inner.next_u64()
    }

    /// Uniform on the open interval (0, 1) with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, n)` by rejection (no modulo bias).
    pub fn index(&mut self, n: usize) -> usize {
        assert!(n > 0);
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n + 1) % n;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return (v % n) as usize;
            }
        }
    }
}

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        Stream::next_u64(self)
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        for chunk in dest.chunks_mut(8) {
            let v = Stream::next_u64(self).to_le_bytes();
            chunk.copy_from_slice(&v[..chunk.len()]);
        }
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand_core::Error> {
        self.fill_bytes(dest);
        Ok(())
    }
}

impl Stream {
    pub(crate) fn take_spare(&mut self) -> Option<f64> {
        self.spare_normal.take()
    }

    pub(crate) fn put_spare(&mut self, v: f64) {
        self.spare_normal = Some(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_state_identical_output() {
        let s = RngState {
            seed: 42,
            stream: 7,
            counter: 3,
        };
        let a: Vec<u64> = {
            let mut st = s.stream();
            (0..16).map(|_| st.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut st = s.stream();
            (0..16).map(|_| st.next_u64()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn counter_positions_the_stream() {
        let base = RngState::new(9);
        let mut full = base.stream();
        let all: Vec<u64> = (0..10).map(|_| full.next_u64()).collect();
        let mut skipped = base.advanced(4).stream();
        let tail: Vec<u64> = (0..6).map(|_| skipped.next_u64()).collect();
        assert_eq!(&all[4..], &tail[..]);
        assert_eq!(full.state().counter, 10);
    }

    #[test]
    fn distinct_streams_differ() {
        let root = RngState::new(1);
        let a = root.child(0).stream().next_u64();
        let b = root.child(1).stream().next_u64();
        let c = root.stream().next_u64();
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_ne!(root.substream("bootstrap"), root.substream("posterior"));
    }

    #[test]
    fn uniform_is_open_interval_and_index_in_range() {
        let mut st = RngState::new(3).stream();
        for _ in 0..10_000 {
            let u = st.uniform();
            assert!(u > 0.0 && u < 1.0);
            assert!(st.index(7) < 7);
        }
        assert_eq!(st.index(1), 0);
    }
}
