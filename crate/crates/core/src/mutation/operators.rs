use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Which operator collection a generation run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorSet {
    Common,
    Comprehensive,
}

impl OperatorSet {
    pub fn as_str(self) -> &'static str {
        match self {
            OperatorSet::Common => "common",
            OperatorSet::Comprehensive => "comprehensive",
        }
    }

    pub fn contains(self, op: Operator) -> bool {
        match self {
            OperatorSet::Common => op.membership() == Membership::Common,
            OperatorSet::Comprehensive => true,
        }
    }
}

impl fmt::Display for OperatorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "common" => Ok(OperatorSet::Common),
            "comprehensive" => Ok(OperatorSet::Comprehensive),
            other => Err(format!("unknown operator set `{other}` (expected common or comprehensive)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Membership {
    Common,
    ComprehensiveOnly,
}

/// Mutation operators. The first twelve form the common set; the
/// comprehensive set adds the remaining seven.
#[allow(clippy::upper_case_acronyms)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Operator {
    CondBoundary,
    NegateCond,
    RemoveCond,
    Math,
    Increments,
    InvertNeg,
    InlineConst,
    ReturnValues,
    VoidMethodCall,
    MethodCall,
    MemberVariable,
    Switch,
    ABS,
    AOD,
    AOR,
    CRCR,
    OBBN,
    ROR,
    UOI,
}

impl Operator {
    pub const ALL: [Operator; 19] = [
        Operator::CondBoundary,
        Operator::NegateCond,
        Operator::RemoveCond,
        Operator::Math,
        Operator::Increments,
        Operator::InvertNeg,
        Operator::InlineConst,
        Operator::ReturnValues,
        Operator::VoidMethodCall,
        Operator::MethodCall,
        Operator::MemberVariable,
        Operator::Switch,
        Operator::ABS,
        Operator::AOD,
        Operator::AOR,
        Operator::CRCR,
        Operator::OBBN,
        Operator::ROR,
        Operator::UOI,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::CondBoundary => "CondBoundary",
            Operator::NegateCond => "NegateCond",
            Operator::RemoveCond => "RemoveCond",
            Operator::Math => "Math",
            Operator::Increments => "Increments",
            Operator::InvertNeg => "InvertNeg",
            Operator::InlineConst => "InlineConst",
            Operator::ReturnValues => "ReturnValues",
            Operator::VoidMethodCall => "VoidMethodCall",
            Operator::MethodCall => "MethodCall",
            Operator::MemberVariable => "MemberVariable",
            Operator::Switch => "Switch",
            Operator::ABS => "ABS",
            Operator::AOD => "AOD",
            Operator::AOR => "AOR",
            Operator::CRCR => "CRCR",
            Operator::OBBN => "OBBN",
            Operator::ROR => "ROR",
            Operator::UOI => "UOI",
        }
    }

    pub fn membership(self) -> Membership {
        use Operator::*;
        match self {
            ABS | AOD | AOR | CRCR | OBBN | ROR | UOI => Membership::ComprehensiveOnly,
            _ => Membership::Common,
        }
    }

    /// Common operator whose instances a comprehensive operator emits instead
    /// when both are active.
    pub fn absorbed_by(self) -> Option<Operator> {
        match self {
            Operator::CondBoundary | Operator::NegateCond => Some(Operator::ROR),
            Operator::Math => Some(Operator::AOR),
            Operator::InlineConst => Some(Operator::CRCR),
            _ => None,
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operator::ALL
            .iter()
            .copied()
            .find(|op| op.name() == s)
            .ok_or_else(|| format!("unknown operator `{s}`"))
    }
}
