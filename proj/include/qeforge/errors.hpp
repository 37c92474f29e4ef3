// Copyright 2026 The qeforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qeforge {

// Root of every error the toolkit raises. Callers that only need to report
// a failure catch this; callers that branch on the cause catch a subclass.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Syntax problems in a serialized record or input file row.
class MalformedRecord : public Error {
 public:
  using Error::Error;
};

// A well-formed value that breaks a domain rule (score range, score-0
// exclusivity, lineage law, ...).
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t row, const std::string& what)
      : Error(file + ":" + std::to_string(row) + ": " + what),
        file_(std::move(file)),
        row_(row) {}
  const std::string& file() const { return file_; }
  std::size_t row() const { return row_; }

 private:
  std::string file_;
  std::size_t row_;
};

class EmptyField : public Error {
 public:
  explicit EmptyField(std::size_t row)
      : Error("empty field in row " + std::to_string(row)), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

class EngineFailure : public Error {
 public:
  EngineFailure(std::string engine, const std::string& cause)
      : Error("engine '" + engine + "' failed: " + cause),
        engine_(std::move(engine)) {}
  const std::string& engine() const { return engine_; }

 private:
  std::string engine_;
};

class EmptyText : public Error {
 public:
  EmptyText() : Error("text has no tokens") {}
};

class InsufficientSites : public Error {
 public:
  InsufficientSites(int requested, std::size_t available)
      : Error("requested " + std::to_string(requested) +
              " injection sites, only " + std::to_string(available) +
              " available"),
        requested_(requested),
        available_(available) {}
  int requested() const { return requested_; }
  std::size_t available() const { return available_; }

 private:
  int requested_;
  std::size_t available_;
};

class ScoreTooLow : public Error {
 public:
  using Error::Error;
};

class PlanInfeasible : public Error {
 public:
  PlanInfeasible(int errors, std::size_t requested, std::size_t achievable)
      : Error("plan asks for " + std::to_string(requested) + " variants with " +
              std::to_string(errors) + " error(s); only " +
              std::to_string(achievable) + " achievable (shortfall " +
              std::to_string(requested - achievable) + ")"),
        errors_(errors),
        requested_(requested),
        achievable_(achievable) {}
  int errors() const { return errors_; }
  std::size_t requested() const { return requested_; }
  std::size_t achievable() const { return achievable_; }
  std::size_t shortfall() const { return requested_ - achievable_; }

 private:
  int errors_;
  std::size_t requested_;
  std::size_t achievable_;
};

class TooShort : public Error {
 public:
  using Error::Error;
};

class PoolTooSmall : public Error {
 public:
  using Error::Error;
};

class ClassExhausted : public Error {
 public:
  ClassExhausted(int score, std::size_t need, std::size_t have)
      : Error("score class " + std::to_string(score) + " needs " +
              std::to_string(need) + " records, pool has " +
              std::to_string(have)),
        score_(score),
        need_(need),
        have_(have) {}
  int score() const { return score_; }
  std::size_t need() const { return need_; }
  std::size_t have() const { return have_; }

 private:
  int score_;
  std::size_t need_;
  std::size_t have_;
};

class CapInfeasible : public Error {
 public:
  using Error::Error;
};

class ZeroVariance : public Error {
 public:
  ZeroVariance() : Error("sequence has zero variance") {}
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class SingularSystem : public Error {
 public:
  using Error::Error;
};

class UnknownSegment : public Error {
 public:
  explicit UnknownSegment(const std::string& id)
      : Error("unknown segment '" + id + "'") {}
};

class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace qeforge
