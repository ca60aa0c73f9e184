#pragma once

#include <stdexcept>
#include <string>

namespace ransim {

/// Base of every error the simulator raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed configuration or scenario text.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Well-formed input that violates a model invariant. `entity()` names the
/// offending id when one exists.
class ValidationError : public Error {
public:
    ValidationError(const std::string& message, std::string entity = {})
        : Error(message), entity_(std::move(entity)) {}

    const std::string& entity() const noexcept { return entity_; }

private:
    std::string entity_;
};

class UnknownEntityError : public Error {
public:
    UnknownEntityError(const std::string& kind, std::string id)
        : Error("unknown " + kind + " '" + id + "'"), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// A sector cannot take another UE.
class CapacityError : public Error {
public:
    CapacityError(const std::string& message, std::string sector)
        : Error(message), sector_(std::move(sector)) {}

    const std::string& sector() const noexcept { return sector_; }

private:
    std::string sector_;
};

/// Placement found no sector with free capacity anywhere in the ring.
class NetworkFullError : public Error {
public:
    explicit NetworkFullError(const std::string& ue)
        : Error("no sector has free capacity for UE '" + ue + "'"), ue_(ue) {}

    const std::string& ue() const noexcept { return ue_; }

private:
    std::string ue_;
};

}  // namespace ransim
