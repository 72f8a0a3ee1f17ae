// Copyright 2026 The Lexcheck Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEXCHECK_ERRORS_H_
#define LEXCHECK_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace lexcheck {

// Root of every error raised by the library. Callers that only need to
// distinguish "our" failures from std ones can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A structured record is missing a required field or has the wrong shape.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& field, const std::string& detail)
      : Error("schema error: field '" + field + "': " + detail), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A field is present but its value is out of domain.
class ValueError : public Error {
 public:
  using Error::Error;
};

// Rule-language syntax error with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& detail)
      : Error("syntax error at " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + detail),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

class DuplicateClauseId : public Error {
 public:
  using Error::Error;
};

class KBNotValidated : public Error {
 public:
  KBNotValidated() : Error("knowledge base has not passed validation") {}
};

class NotUnsat : public Error {
 public:
  NotUnsat() : Error("unsat core requested for a satisfiable problem") {}
};

class EmptyUnion : public Error {
 public:
  EmptyUnion() : Error("no admissible sentencing interval") {}
};

class ConflictingFacts : public Error {
 public:
  ConflictingFacts(const std::string& predicate,
                   const std::vector<std::string>& values)
      : Error(Describe(predicate, values)), predicate_(predicate),
        values_(values) {}
  const std::string& predicate() const { return predicate_; }
  const std::vector<std::string>& values() const { return values_; }

 private:
  static std::string Describe(const std::string& predicate,
                              const std::vector<std::string>& values) {
    std::string out = "conflicting facts for " + predicate + ":";
    for (const auto& v : values) out += " " + v;
    return out;
  }
  std::string predicate_;
  std::vector<std::string> values_;
};

class ExtractorUnavailable : public Error {
 public:
  ExtractorUnavailable()
      : Error("fact repair requested but no extractor is configured") {}
};

// Network or HTTP failure talking to an external text-generation service.
class ServiceError : public Error {
 public:
  using Error::Error;
};

// A service response does not follow the mandated shape.
class ParseError : public Error {
 public:
  using Error::Error;
};

class UnknownRule : public Error {
 public:
  explicit UnknownRule(const std::string& name)
      : Error("unknown perturbation rule: " + name), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class RuleLabelMismatch : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  explicit EmptyInput(const std::string& metric)
      : Error("no input records for metric " + metric) {}
};

class MissingBaseline : public Error {
 public:
  explicit MissingBaseline(const std::string& group)
      : Error("baseline group not present: " + group) {}
};

// Evaluation inputs reference cases that have no prediction.
class MissingPredictions : public Error {
 public:
  explicit MissingPredictions(std::vector<std::string> ids)
      : Error(Describe(ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  static std::string Describe(const std::vector<std::string>& ids) {
    std::string out = "no prediction for " + std::to_string(ids.size()) + " case(s):";
    for (const auto& id : ids) out += " " + id;
    return out;
  }
  std::vector<std::string> ids_;
};

}  // namespace lexcheck

#endif  // LEXCHECK_ERRORS_H_
