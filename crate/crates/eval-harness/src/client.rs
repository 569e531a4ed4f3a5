//! Chat-completions client. Speaks the common `POST {base}/chat/completions`
//! shape, sends temperature-0 requests, retries transient failures with
//! exponential backoff, and records token usage only when the endpoint
//! reports it. The credential is read from an environment variable at
//! request time and never stored in configs or results.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::prompt::PromptBundle;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointConfig {
    /// Base URL up to the API root, e.g. `http://127.0.0.1:8080/v1`.
    pub base_url: String,
    pub model: String,
    /// NAME of the environment variable holding the API key. The key
    /// itself is looked up per request and never serialized anywhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub api_key_env: Option<String>,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_max_retries")]
    pub max_retries: u32,
    #[serde(default = "default_timeout_secs")]
    pub timeout_secs: u64,
}

fn default_max_retries() -> u32 {
    2
}

fn default_timeout_secs() -> u64 {
    120
}

impl EndpointConfig {
    pub fn new(base_url: impl Into<String>, model: impl Into<String>) -> Self {
        EndpointConfig {
            base_url: base_url.into(),
            model: model.into(),
            api_key_env: None,
            temperature: 0.0,
            max_retries: default_max_retries(),
            timeout_secs: default_timeout_secs(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
    #[error("network error: {0}")]
    Network(String),
    #[error("endpoint returned HTTP {status}: {body}")]
    Http { status: u16, body: String },
    #[error("malformed endpoint response: {0}")]
    BadResponse(String),
}

/// A single raw completion plus transport metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCompletion {
    pub text: String,
    pub prompt_tokens: Option<u64>,
    pub completion_tokens: Option<u64>,
    pub latency_ms: u64,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    temperature: f64,
    messages: Vec<ChatMessage<'a>>,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<Choice>,
    #[serde(default)]
    usage: Option<Usage>,
}

#[derive(Deserialize)]
struct Choice {
    message: ResponseMessage,
}

#[derive(Deserialize)]
struct ResponseMessage {
    content: String,
}

#[derive(Deserialize)]
struct Usage {
    #[serde(default)]
    prompt_tokens: Option<u64>,
    #[serde(default)]
    completion_tokens: Option<u64>,
}

fn transient(status: u16) -> bool {
    status == 429 || status >= 500
}

/// One temperature-controlled completion for the prompt. Transient
/// failures (network, 429, 5xx) are retried `max_retries` times with
/// exponential backoff; anything else fails immediately.
pub fn llm_complete(
    prompt: &PromptBundle,
    config: &EndpointConfig,
) -> Result<RawCompletion, ClientError> {
    let api_key = match &config.api_key_env {
        Some(var) => Some(
            std::env::var(var).map_err(|_| ClientError::MissingCredential(var.clone()))?,
        ),
        None => None,
    };

    let client = reqwest::blocking::Client::builder()
        .timeout(Duration::from_secs(config.timeout_secs))
        .build()
        .map_err(|e| ClientError::Network(e.to_string()))?;

    let mut messages = Vec::new();
    if !prompt.system.is_empty() {
        messages.push(ChatMessage { role: "system", content: &prompt.system });
    }
    messages.push(ChatMessage { role: "user", content: &prompt.user });
    let request =
        ChatRequest { model: &config.model, temperature: config.temperature, messages };
    let url = format!("{}/chat/completions", config.base_url.trim_end_matches('/'));

    let started = Instant::now();
    let mut last_err = None;
    for attempt in 0..=config.max_retries {
        if attempt > 0 {
            std::thread::sleep(Duration::from_millis(200 << (attempt - 1).min(6)));
        }
        let mut builder = client.post(&url).json(&request);
        if let Some(key) = &api_key {
            builder = builder.bearer_auth(key);
        }
        match builder.send() {
            Err(e) => {
                last_err = Some(ClientError::Network(e.to_string()));
                continue;
            }
            Ok(response) => {
                let status = response.status().as_u16();
                if status != 200 {
                    let body: String =
                        response.text().unwrap_or_default().chars().take(300).collect();
                    let err = ClientError::Http { status, body };
                    if transient(status) {
                        last_err = Some(err);
                        continue;
                    }
                    return Err(err);
                }
                let parsed: ChatResponse = response
                    .json()
                    .map_err(|e| ClientError::BadResponse(e.to_string()))?;
                let choice = parsed
                    .choices
                    .into_iter()
                    .next()
                    .ok_or_else(|| ClientError::BadResponse("no choices".into()))?;
                let usage = parsed.usage.unwrap_or(Usage {
                    prompt_tokens: None,
                    completion_tokens: None,
                });
                return Ok(RawCompletion {
                    text: choice.message.content,
                    prompt_tokens: usage.prompt_tokens,
                    completion_tokens: usage.completion_tokens,
                    latency_ms: started.elapsed().as_millis() as u64,
                });
            }
        }
    }
    Err(last_err.unwrap_or_else(|| ClientError::Network("no attempts made".into())))
}
