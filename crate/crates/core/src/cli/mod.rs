//! Pieces of the command-line front end that are useful as a library:
//! the equation grammar and the verification suites.

pub mod parse;
pub mod suite;

/// Process exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding the default enumeration cap.
pub const CAP_ENV: &str = "SIEGELKIT_CAP";
