pub mod binary;
pub mod cli;
pub mod decomposition;
pub mod equations;
pub mod error;
pub mod funtf;
pub mod io;
pub mod linalg;
pub mod power;
pub mod rng;
pub mod roots;
pub mod tensor;
pub mod variety;
pub mod waring;
