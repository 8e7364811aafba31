#pragma once

#include <stdexcept>
#include <string>

namespace lemma {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LEMMA_DEFINE_ERROR(Name)        \
  class Name : public Error {           \
   public:                              \
    using Error::Error;                 \
  }

// Validation-class failures (CLI exit code 2).
LEMMA_DEFINE_ERROR(ConfigError);
LEMMA_DEFINE_ERROR(EmptyRegion);
LEMMA_DEFINE_ERROR(UnknownObject);
LEMMA_DEFINE_ERROR(UnknownColorKind);
LEMMA_DEFINE_ERROR(GenerationExhausted);
LEMMA_DEFINE_ERROR(UnresolvableEntity);
LEMMA_DEFINE_ERROR(DecompositionFailure);
LEMMA_DEFINE_ERROR(DemonstrationFailure);
LEMMA_DEFINE_ERROR(ParseError);
LEMMA_DEFINE_ERROR(UnknownTemplate);
LEMMA_DEFINE_ERROR(CodecError);
LEMMA_DEFINE_ERROR(OutOfBounds);
LEMMA_DEFINE_ERROR(BadCount);
LEMMA_DEFINE_ERROR(MissingSplit);
LEMMA_DEFINE_ERROR(PolicyFault);

// I/O-class failures (CLI exit code 3).
LEMMA_DEFINE_ERROR(IoError);
LEMMA_DEFINE_ERROR(SchemaVersionMismatch);

#undef LEMMA_DEFINE_ERROR

}  // namespace lemma
