//! Merge judges and completion backends.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use log::{debug, warn};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::oracle::offline_merge_oracle;
use super::prompt::{build_prompt, parse_decision};
use super::{CandidatePair, MergeDecision};

/// Turns a rendered prompt into a completion.
pub trait CompletionBackend: Send + Sync {
    fn name(&self) -> &str;

    /// Transport failures come back as [`Error::Backend`]; whatever text the
    /// endpoint returns, however malformed, is `Ok`.
    fn complete(&self, prompt: &str) -> Result<String>;
}

/// Decides one candidate pair.
pub trait MergeJudge<T>: Send + Sync {
    fn name(&self) -> &str;
    fn judge(&self, pair: &CandidatePair<T>) -> MergeDecision;
}

/// Deterministic, network-free judge.
#[derive(Debug, Clone, Copy, Default)]
pub struct OfflineJudge;

impl<T: Scalar> MergeJudge<T> for OfflineJudge {
    fn name(&self) -> &str {
        "offline"
    }

    fn judge(&self, pair: &CandidatePair<T>) -> MergeDecision {
        offline_merge_oracle(pair)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    /// Retries after the first attempt.
    pub max_retries: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy {
            max_retries: 2,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    fn delay(&self, attempt: u32) -> Duration {
        self.base_delay.saturating_mul(1 << attempt.min(16))
    }
}

/// Calls the backend, retrying retryable errors with exponential backoff.
pub fn complete_with_retry(backend: &dyn CompletionBackend, prompt: &str, policy: RetryPolicy) -> Result<String> {
    let mut attempt = 0;
    loop {
        match backend.complete(prompt) {
            Ok(text) => return Ok(text),
            Err(e) if e.is_retryable() && attempt < policy.max_retries => {
                let wait = policy.delay(attempt);
                debug!("{} failed ({e}); retry {} in {wait:?}", backend.name(), attempt + 1);
                thread::sleep(wait);
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Prompt → backend → reply parsing. Backend failures that survive the
/// retry policy become a no-merge.
pub struct LlmJudge<B> {
    backend: B,
    retry: RetryPolicy,
}

impl<B: CompletionBackend> LlmJudge<B> {
    pub fn new(backend: B, retry: RetryPolicy) -> Self {
        LlmJudge { backend, retry }
    }

    pub fn backend(&self) -> &B {
        &self.backend
    }
}

impl<T: Scalar, B: CompletionBackend> MergeJudge<T> for LlmJudge<B> {
    fn name(&self) -> &str {
        self.backend.name()
    }

    fn judge(&self, pair: &CandidatePair<T>) -> MergeDecision {
        let prompt = build_prompt(pair);
        match complete_with_retry(&self.backend, &prompt.rendered, self.retry) {
            Ok(reply) => parse_decision(&reply, pair),
            Err(e) => {
                warn!(
                    "no merge for `{}` / `{}`: {e}",
                    pair.template_a.text(),
                    pair.template_b.text()
                );
                MergeDecision::no(format!("backend error: {e}"))
            }
        }
    }
}

/// Judges every pair with at most `max_in_flight` concurrent calls. The
/// returned decisions line up with `pairs` whatever the completion order.
pub fn decide_all<T: Scalar>(
    pairs: &[CandidatePair<T>],
    judge: &dyn MergeJudge<T>,
    max_in_flight: usize,
) -> Vec<MergeDecision> {
    let workers = max_in_flight.clamp(1, pairs.len().max(1));
    if workers == 1 {
        return pairs.iter().map(|p| judge.judge(p)).collect();
    }
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<MergeDecision>>> = Mutex::new(vec![None; pairs.len()]);
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(pair) = pairs.get(i) else { break };
                let d = judge.judge(pair);
                slots.lock().expect("decision slots poisoned")[i] = Some(d);
            });
        }
    });
    slots
        .into_inner()
        .expect("decision slots poisoned")
        .into_iter()
        .map(|d| d.unwrap_or_else(|| MergeDecision::no("not judged")))
        .collect()
}

/// Connection settings for an OpenAI-style chat-completions endpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HttpChatSettings {
    /// e.g. `https://api.openai.com/v1`; `/chat/completions` is appended.
    pub base_url: String,
    pub model: String,
    /// Literal key; takes precedence over `api_key_env`.
    #[serde(default)]
    pub api_key: Option<String>,
    /// Name of the environment variable holding the key.
    #[serde(default = "default_api_key_env")]
    pub api_key_env: String,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
    #[serde(default = "default_max_in_flight")]
    pub max_in_flight: usize,
}

fn default_api_key_env() -> String {
    "LOGSIEVE_API_KEY".to_string()
}

fn default_timeout_secs() -> u64 {
    60
}

fn default_max_in_flight() -> usize {
    4
}

impl HttpChatSettings {
    pub fn resolve_api_key(&self) -> Option<String> {
        self.api_key
            .clone()
            .or_else(|| std::env::var(&self.api_key_env).ok())
            .filter(|k| !k.is_empty())
    }
}

pub struct HttpChatBackend {
    settings: HttpChatSettings,
    endpoint: String,
    api_key: Option<String>,
    client: reqwest::blocking::Client,
}

impl HttpChatBackend {
    pub fn new(settings: HttpChatSettings) -> Result<Self> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(settings.timeout_secs.max(1)))
            .build()
            .map_err(|e| Error::Backend {
                message: format!("cannot build http client: {e}"),
                retryable: false,
            })?;
        let endpoint = format!("{}/chat/completions", settings.base_url.trim_end_matches('/'));
        let api_key = settings.resolve_api_key();
        Ok(HttpChatBackend {
            settings,
            endpoint,
            api_key,
            client,
        })
    }

    pub fn settings(&self) -> &HttpChatSettings {
        &self.settings
    }

    pub fn request_body(&self, prompt: &str) -> Value {
        json!({
            "model": self.settings.model,
            "temperature": 0,
            "messages": [
                { "role": "user", "content": prompt }
            ]
        })
    }
}

impl CompletionBackend for HttpChatBackend {
    fn name(&self) -> &str {
        &self.settings.model
    }

    fn complete(&self, prompt: &str) -> Result<String> {
        let mut req = self.client.post(&self.endpoint).json(&self.request_body(prompt));
        if let Some(key) = &self.api_key {
            req = req.bearer_auth(key);
        }
        let resp = req.send().map_err(|e| Error::Backend {
            message: format!("request to {} failed: {e}", self.endpoint),
            retryable: true,
        })?;
        let status = resp.status();
        if !status.is_success() {
            return Err(Error::Backend {
                message: format!("{} returned {status}", self.endpoint),
                retryable: status.is_server_error() || status.as_u16() == 429,
            });
        }
        let body = resp.text().map_err(|e| Error::Backend {
            message: format!("reading response body: {e}"),
            retryable: true,
        })?;
        Ok(extract_chat_content(&body).unwrap_or_default())
    }
}

fn extract_chat_content(body: &str) -> Option<String> {
    let v: Value = serde_json::from_str(body).ok()?;
    v.pointer("/choices/0/message/content")?.as_str().map(str::to_string)
}
