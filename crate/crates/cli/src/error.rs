use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorKind {
    Validation,
    Numerical,
}

/// Failure reported as JSON on stderr.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Validation,
            message: message.into(),
            point: None,
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Numerical,
            message: message.into(),
            point: None,
        }
    }

    pub fn at(mut self, point: Vec<f64>) -> Self {
        self.point = Some(point);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Validation => 2,
            ErrorKind::Numerical => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?} error: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<twistorlab_core::Error> for CliError {
    fn from(e: twistorlab_core::Error) -> Self {
        let point = match &e {
            twistorlab_core::Error::OutsideDomain { point } => Some(point.clone()),
            _ => None,
        };
        Self {
            kind: if e.is_validation() {
                ErrorKind::Validation
            } else {
                ErrorKind::Numerical
            },
            message: e.to_string(),
            point,
        }
    }
}
