//! Named pass/fail results with printable witnesses.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub location: String,
    pub value: String,
}

impl Witness {
    pub fn new(location: impl Into<String>, value: impl fmt::Display) -> Self {
        Witness {
            location: location.into(),
            value: value.to_string(),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub witness: Option<Witness>,
}

impl Check {
    pub fn pass(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            witness: None,
        }
    }

    pub fn fail(name: impl Into<String>, witness: Witness) -> Self {
        Check {
            name: name.into(),
            witness: Some(witness),
        }
    }

    pub fn from_option(name: impl Into<String>, witness: Option<Witness>) -> Self {
        Check {
            name: name.into(),
            witness,
        }
    }

    pub fn ok(&self) -> bool {
        self.witness.is_none()
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "ok    {}", self.name),
            Some(w) => write!(f, "FAIL  {} ({w})", self.name),
        }
    }
}

pub fn all_ok(checks: &[Check]) -> bool {
    checks.iter().all(Check::ok)
}

/// The first failing check, if any.
pub fn first_failure(checks: &[Check]) -> Option<&Check> {
    checks.iter().find(|c| !c.ok())
}
