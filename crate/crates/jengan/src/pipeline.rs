//! Background batch synthesis feeding the training loop through a bounded
//! queue. Batches arrive in step order, so training stays deterministic.

use std::sync::mpsc::{sync_channel, Receiver};
use std::thread::{self, JoinHandle};

use jengan_core::metrics::MelTransform;
use jengan_core::vocoder::{Batch, Corpus};

use crate::{Error, Result};

/// Batches buffered ahead of the training loop.
pub const QUEUE_DEPTH: usize = 4;

pub struct BatchStream {
    rx: Receiver<Result<Batch>>,
    worker: Option<JoinHandle<()>>,
}

impl BatchStream {
    /// Synthesizes batches `0..steps` of `corpus` on a worker thread.
    pub fn spawn(corpus: Corpus, mel: MelTransform, batch_size: usize, steps: u64) -> Self {
        let (tx, rx) = sync_channel(QUEUE_DEPTH);
        let worker = thread::spawn(move || {
            for step in 0..steps {
                let batch = corpus.batch(step, batch_size, &mel).map_err(Error::from);
                let failed = batch.is_err();
                // the receiver hanging up just means training stopped early
                if tx.send(batch).is_err() || failed {
                    break;
                }
            }
        });
        BatchStream { rx, worker: Some(worker) }
    }

    pub fn next_batch(&mut self) -> Result<Batch> {
        self.rx.recv().map_err(|_| Error::Pipeline("worker exited before the last batch".into()))?
    }
}

impl Drop for BatchStream {
    fn drop(&mut self) {
        // unblock a worker waiting on a full queue, then reap it
        let (_, rx) = sync_channel(0);
        drop(std::mem::replace(&mut self.rx, rx));
        if let Some(w) = self.worker.take() {
            let _ = w.join();
        }
    }
}
