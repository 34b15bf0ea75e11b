use serde::{Deserialize, Serialize};

use super::CoeffError;

/// A named real parameter, identified by its position in a context.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Parameter {
    pub index: usize,
    pub name: String,
}

/// The ordered list of declared parameter names. Polynomial variable `k`
/// is the parameter with index `k`.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParameterContext {
    names: Vec<String>,
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "i" && name != "I"
}

impl ParameterContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self, CoeffError> {
        let mut ctx = Self::new();
        for n in names {
            ctx.declare(n.as_ref())?;
        }
        Ok(ctx)
    }

    /// Declare a new parameter; names must be fresh identifiers.
    pub fn declare(&mut self, name: &str) -> Result<Parameter, CoeffError> {
        if !valid_identifier(name) {
            return Err(CoeffError::InvalidName(name.to_string()));
        }
        if self.index_of(name).is_some() {
            return Err(CoeffError::DuplicateParameter(name.to_string()));
        }
        self.names.push(name.to_string());
        Ok(Parameter {
            index: self.names.len() - 1,
            name: name.to_string(),
        })
    }

    /// Declare `name` unless it already exists.
    pub fn ensure(&mut self, name: &str) -> Result<Parameter, CoeffError> {
        match self.index_of(name) {
            Some(index) => Ok(Parameter {
                index,
                name: name.to_string(),
            }),
            None => self.declare(name),
        }
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn get(&self, name: &str) -> Option<Parameter> {
        self.index_of(name).map(|index| Parameter {
            index,
            name: name.to_string(),
        })
    }

    pub fn name(&self, index: usize) -> String {
        self.names
            .get(index)
            .cloned()
            .unwrap_or_else(|| format!("p{index}"))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn namer(&self) -> impl Fn(usize) -> String + '_ {
        move |i| self.name(i)
    }
}
