use std::sync::Arc;
use std::thread;
use std::time::Duration;

use tpir_core::wire::{decode_query, encode_answer};
use tpir_core::{answer_query, MessageStore};

use crate::error::SimResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Behavior {
    Responsive,
    Silent,
    /// Answers after a fixed delay.
    Delayed(Duration),
}

/// One replica. Sees only query bytes and its read-only copy of the store.
#[derive(Clone, Debug)]
pub struct DatabaseNode {
    pub id: usize,
    pub store: Arc<MessageStore>,
    pub behavior: Behavior,
}

impl DatabaseNode {
    pub fn new(id: usize, store: Arc<MessageStore>, behavior: Behavior) -> Self {
        Self { id, store, behavior }
    }

    /// Answer bytes, or `None` for a silent node.
    pub fn respond(&self, query: &[u8]) -> Option<SimResult<Vec<u8>>> {
        match self.behavior {
            Behavior::Silent => return None,
            Behavior::Delayed(d) => thread::sleep(d),
            Behavior::Responsive => {}
        }
        Some(self.answer(query))
    }

    fn answer(&self, query: &[u8]) -> SimResult<Vec<u8>> {
        let query = decode_query(query)?;
        let answer = answer_query(self.id, &query, &self.store)?;
        Ok(encode_answer(&answer))
    }
}
