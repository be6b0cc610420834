use std::collections::HashSet;
use std::fmt::Display;
use std::future::Future;
use std::time::Duration;

use tokio::sync::watch;
use tokio::task::JoinHandle;
use tokio::time::MissedTickBehavior;

use crate::manifest::{fetch_update_manifest, FeedEntry};
use crate::{IngestError, Result};

pub const MIN_POLL_INTERVAL: Duration = Duration::from_secs(60);

/// Where the poller reads manifests from.
pub trait ManifestSource: Send + Sync + 'static {
    fn fetch(&self) -> impl Future<Output = Result<Vec<FeedEntry>>> + Send;
}

pub struct HttpManifest {
    pub client: reqwest::Client,
    pub url: String,
}

impl ManifestSource for HttpManifest {
    async fn fetch(&self) -> Result<Vec<FeedEntry>> {
        fetch_update_manifest(&self.client, &self.url).await
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PollOutcome {
    pub manifest_entries: usize,
    pub new_entries: usize,
    pub handler_failures: usize,
}

/// Remembers every manifest URL handed out so each is handled once.
#[derive(Debug, Default)]
pub struct Poller {
    seen: HashSet<String>,
}

impl Poller {
    pub fn new() -> Self {
        Poller::default()
    }

    pub fn seen(&self) -> usize {
        self.seen.len()
    }

    /// Fetch one manifest and run `handler` on each entry not seen before.
    /// An entry counts as seen even if its handler fails.
    pub async fn poll_once<S, H, Fut, E>(&mut self, source: &S, handler: &mut H) -> Result<PollOutcome>
    where
        S: ManifestSource,
        H: FnMut(FeedEntry) -> Fut,
        Fut: Future<Output = std::result::Result<(), E>>,
        E: Display,
    {
        let entries = source.fetch().await?;
        let mut outcome = PollOutcome {
            manifest_entries: entries.len(),
            ..PollOutcome::default()
        };
        for entry in entries {
            if !self.seen.insert(entry.url.clone()) {
                continue;
            }
            outcome.new_entries += 1;
            let url = entry.url.clone();
            if let Err(e) = handler(entry).await {
                outcome.handler_failures += 1;
                tracing::error!(%url, error = %e, "feed entry handler failed");
            }
        }
        Ok(outcome)
    }
}

pub struct PollHandle {
    stop: watch::Sender<bool>,
    task: JoinHandle<()>,
}

impl PollHandle {
    /// Ask the loop to exit after the current poll and wait for it.
    pub async fn stop(self) {
        let _ = self.stop.send(true);
        let _ = self.task.await;
    }

    pub fn is_finished(&self) -> bool {
        self.task.is_finished()
    }

    /// Wait for the loop without stopping it (it only ends on panic).
    pub async fn join(self) {
        let _ = self.task.await;
    }
}

/// Poll `source` every `interval` (at least one minute), the first time
/// immediately. `after_poll` sees every poll result, including failures;
/// neither a failed fetch nor a failed handler stops the loop.
pub fn spawn_poller<S, H, Fut, E, A>(interval: Duration, source: S, mut handler: H, mut after_poll: A) -> Result<PollHandle>
where
    S: ManifestSource,
    H: FnMut(FeedEntry) -> Fut + Send + 'static,
    Fut: Future<Output = std::result::Result<(), E>> + Send,
    E: Display,
    A: FnMut(&Result<PollOutcome>) + Send + 'static,
{
    if interval < MIN_POLL_INTERVAL {
        return Err(IngestError::Invalid(format!(
            "poll interval must be at least {}s, got {:?}",
            MIN_POLL_INTERVAL.as_secs(),
            interval
        )));
    }
    let (stop, mut stopped) = watch::channel(false);
    let task = tokio::spawn(async move {
        let mut poller = Poller::new();
        let mut ticks = tokio::time::interval(interval);
        ticks.set_missed_tick_behavior(MissedTickBehavior::Delay);
        loop {
            tokio::select! {
                _ = ticks.tick() => {}
                _ = stopped.changed() => break,
            }
            let result = poller.poll_once(&source, &mut handler).await;
            if let Err(e) = &result {
                tracing::warn!(error = %e, "manifest poll failed");
            }
            after_poll(&result);
            if *stopped.borrow() {
                break;
            }
        }
    });
    Ok(PollHandle { stop, task })
}
