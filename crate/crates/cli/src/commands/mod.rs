pub mod allocate;
pub mod cover;
pub mod generate;
pub mod verify;
