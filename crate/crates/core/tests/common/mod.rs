pub mod oracle;
pub mod proxy;
