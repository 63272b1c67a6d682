//! Ordinal risk classes (severity, exposure, controllability) and ASIL.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

macro_rules! ordinal_class {
    ($(#[$meta:meta])* $name:ident, $prefix:literal, [$($variant:ident = $level:literal),+ $(,)?]) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn level(self) -> u8 {
                match self {
                    $($name::$variant => $level),+
                }
            }

            pub fn from_level(level: u8) -> Option<Self> {
                match level {
                    $($level => Some($name::$variant),)+
                    _ => None,
                }
            }

            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => stringify!($variant)),+
                }
            }

            /// Highest level of this class.
            pub fn max_level() -> u8 {
                Self::ALL.len() as u8 - 1
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ClassParseError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let digits = s
                    .strip_prefix($prefix)
                    .ok_or_else(|| ClassParseError::Syntax(s.to_string()))?;
                if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(ClassParseError::Syntax(s.to_string()));
                }
                digits
                    .parse::<u8>()
                    .ok()
                    .and_then(Self::from_level)
                    .ok_or_else(|| ClassParseError::Range(s.to_string()))
            }
        }
    };
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassParseError {
    #[error("`{0}` is not a class literal")]
    Syntax(String),
    #[error("`{0}` is outside the class range")]
    Range(String),
}

ordinal_class!(
    /// Severity of potential harm: S0 (no injuries) to S3 (life-threatening or fatal).
    SeverityClass, "S", [S0 = 0, S1 = 1, S2 = 2, S3 = 3]
);
ordinal_class!(
    /// Probability of exposure: E0 (incredible) to E4 (high probability).
    ExposureClass, "E", [E0 = 0, E1 = 1, E2 = 2, E3 = 3, E4 = 4]
);
ordinal_class!(
    /// Controllability: C0 (controllable in general) to C3 (difficult to control or uncontrollable).
    ControllabilityClass, "C", [C0 = 0, C1 = 1, C2 = 2, C3 = 3]
);

/// Automotive Safety Integrity Level. Declaration order is the total order
/// `QM < A < B < C < D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum AsilRating {
    QM,
    A,
    B,
    C,
    D,
}

impl AsilRating {
    pub const ALL: [AsilRating; 5] = [
        AsilRating::QM,
        AsilRating::A,
        AsilRating::B,
        AsilRating::C,
        AsilRating::D,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AsilRating::QM => "QM",
            AsilRating::A => "A",
            AsilRating::B => "B",
            AsilRating::C => "C",
            AsilRating::D => "D",
        }
    }

    /// Label used in reports: `QM` or `ASIL X`.
    pub fn label(self) -> String {
        match self {
            AsilRating::QM => "QM".to_string(),
            other => format!("ASIL {}", other.as_str()),
        }
    }
}

impl fmt::Display for AsilRating {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AsilRating {
    type Err = ClassParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "QM" => Ok(AsilRating::QM),
            "A" => Ok(AsilRating::A),
            "B" => Ok(AsilRating::B),
            "C" => Ok(AsilRating::C),
            "D" => Ok(AsilRating::D),
            _ => Err(ClassParseError::Syntax(s.to_string())),
        }
    }
}
