//! External text backends.
//!
//! Both kinds receive `{"text", "chain", "seed"}` and answer `{"text"}`. A
//! command backend reads the request on standard input and writes the
//! response to standard output; an HTTP backend receives it as a POST body.

use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::thread;
use std::time::Duration;

use inkveil_core::pipeline::{BackendResolver, Stage};
use inkveil_core::transforms::{
    BackendKind, BackendSpec, TransformError, TransformSeed, TranslationBackend,
};
use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;

#[derive(Debug, Serialize)]
pub struct BackendRequest<'a> {
    pub text: &'a str,
    pub chain: &'a [String],
    pub seed: u64,
}

#[derive(Debug, Deserialize)]
pub struct BackendResponse {
    pub text: String,
}

/// Parses `builtin`, `cmd:<command line>` or an `http://` / `https://` URL.
pub fn parse_backend_spec(s: &str) -> Result<BackendSpec, String> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("builtin") {
        Ok(BackendSpec::builtin())
    } else if let Some(cmd) = s.strip_prefix("cmd:") {
        if cmd.trim().is_empty() {
            return Err("empty command in backend spec".into());
        }
        Ok(BackendSpec::command(cmd))
    } else if s.starts_with("http://") || s.starts_with("https://") {
        Ok(BackendSpec::http(s))
    } else {
        Err(format!(
            "unrecognized backend `{s}` (expected builtin, cmd:<command> or an http(s) URL)"
        ))
    }
}

pub struct CommandBackend {
    pub command: String,
    pub timeout: Duration,
}

impl TranslationBackend for CommandBackend {
    fn translate(
        &self,
        text: &str,
        chain: &[String],
        seed: TransformSeed,
    ) -> Result<String, TransformError> {
        let unavailable =
            |msg: String| TransformError::BackendUnavailable(format!("`{}`: {msg}", self.command));
        let request = serde_json::to_vec(&BackendRequest {
            text,
            chain,
            seed: seed.0,
        })
        .expect("request serializes");
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(&self.command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| unavailable(e.to_string()))?;

        let mut stdin = child.stdin.take().expect("piped stdin");
        let writer = thread::spawn(move || stdin.write_all(&request));
        let mut stdout = child.stdout.take().expect("piped stdout");
        let reader = thread::spawn(move || {
            let mut buf = Vec::new();
            stdout.read_to_end(&mut buf).map(|_| buf)
        });
        let mut stderr = child.stderr.take().expect("piped stderr");
        let err_reader = thread::spawn(move || {
            let mut buf = String::new();
            let _ = stderr.read_to_string(&mut buf);
            buf
        });

        let status = match child
            .wait_timeout(self.timeout)
            .map_err(|e| unavailable(e.to_string()))?
        {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(TransformError::Timeout(self.timeout.as_secs()));
            }
        };
        let _ = writer.join();
        let output = reader
            .join()
            .map_err(|_| unavailable("reader panicked".into()))?;
        let diagnostics = err_reader.join().unwrap_or_default();
        if !status.success() {
            let tail = diagnostics.trim();
            return Err(unavailable(if tail.is_empty() {
                status.to_string()
            } else {
                format!("{status}: {tail}")
            }));
        }
        let output = output.map_err(|e| unavailable(e.to_string()))?;
        serde_json::from_slice::<BackendResponse>(&output)
            .map(|r| r.text)
            .map_err(|e| unavailable(format!("invalid response: {e}")))
    }
}

pub struct HttpBackend {
    pub url: String,
    pub timeout: Duration,
}

impl TranslationBackend for HttpBackend {
    fn translate(
        &self,
        text: &str,
        chain: &[String],
        seed: TransformSeed,
    ) -> Result<String, TransformError> {
        let unavailable =
            |msg: String| TransformError::BackendUnavailable(format!("{}: {msg}", self.url));
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut response = match agent.post(&self.url).send_json(BackendRequest {
            text,
            chain,
            seed: seed.0,
        }) {
            Ok(r) => r,
            Err(ureq::Error::Timeout(_)) => {
                return Err(TransformError::Timeout(self.timeout.as_secs()))
            }
            Err(e) => return Err(unavailable(e.to_string())),
        };
        if response.status() != 200 {
            return Err(unavailable(format!("HTTP {}", response.status())));
        }
        response
            .body_mut()
            .read_json::<BackendResponse>()
            .map(|r| r.text)
            .map_err(|e| unavailable(format!("invalid response: {e}")))
    }
}

/// Resolves command and HTTP specs into live backends.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuntimeResolver;

impl BackendResolver for RuntimeResolver {
    fn resolve(
        &self,
        _stage: Stage,
        spec: &BackendSpec,
    ) -> Result<Box<dyn TranslationBackend + '_>, TransformError> {
        let timeout = Duration::from_secs(spec.timeout_secs.max(1));
        match spec.kind {
            BackendKind::ExternalCommand => Ok(Box::new(CommandBackend {
                command: spec.endpoint.clone(),
                timeout,
            })),
            BackendKind::Http => Ok(Box::new(HttpBackend {
                url: spec.endpoint.clone(),
                timeout,
            })),
            BackendKind::Builtin => Err(TransformError::BackendUnavailable(
                "builtin is not an external backend".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_parsing() {
        assert_eq!(
            parse_backend_spec("builtin").unwrap(),
            BackendSpec::builtin()
        );
        assert_eq!(
            parse_backend_spec("cmd:cat").unwrap(),
            BackendSpec::command("cat")
        );
        assert_eq!(
            parse_backend_spec("http://h:1/t").unwrap(),
            BackendSpec::http("http://h:1/t")
        );
        assert!(parse_backend_spec("cmd:").is_err());
        assert!(parse_backend_spec("ftp://x").is_err());
    }
}
