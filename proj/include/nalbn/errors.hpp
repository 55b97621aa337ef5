#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nalbn {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class CycleDetected : public Error {
 public:
  explicit CycleDetected(std::vector<std::size_t> path);
  const std::vector<std::size_t>& path() const noexcept { return path_; }

 private:
  std::vector<std::size_t> path_;
};

class MalformedParents : public Error {
 public:
  MalformedParents(std::size_t node, const std::string& what);
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

class NodeCountMismatch : public Error {
 public:
  NodeCountMismatch(std::size_t lhs, std::size_t rhs);
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroSampleSize : public Error {
 public:
  ZeroSampleSize() : Error("penalty evaluated at sample size 0") {}
};

class StateSpaceTooLarge : public Error {
 public:
  StateSpaceTooLarge(double states, std::size_t cap);
};

class TableMismatch : public Error {
 public:
  using Error::Error;
};

class AllCandidatesUnobservable : public Error {
 public:
  explicit AllCandidatesUnobservable(std::size_t node);
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class NonNormalizedParameters : public Error {
 public:
  using Error::Error;
};

class UnobservableNode : public Error {
 public:
  explicit UnobservableNode(std::size_t node);
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class InsufficientGrid : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace nalbn
