pub mod arrangement;
pub mod exact;
pub mod corpus;
pub mod cutting;
pub mod encoder;
pub mod io;
pub mod wiring;
