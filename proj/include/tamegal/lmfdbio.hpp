#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tamegal/extfield.hpp"

namespace tamegal {

/* file, cache, or transport trouble; subtypes distinguish "no source had
   the data" from "a source answered garbage" */
struct io_error : std::runtime_error {
    explicit io_error(const std::string& m) : std::runtime_error(m) {}
};

/* no enabled source (cache, fixture, network) could supply the profile */
struct profile_unavailable : io_error {
    explicit profile_unavailable(const std::string& m) : io_error(m) {}
};

/* a source answered but the payload fails to parse or validate; the
   message carries the offending field path */
struct malformed_profile : io_error {
    explicit malformed_profile(const std::string& m) : io_error(m) {}
};

struct fixture_file {
    unsigned schema_version = 0;
    std::map<std::string, number_field_profile> fields;
};

/* parse and schema-check a fixture; every record must come back from
   validate_profile clean. class_number 0 marks a record whose class data
   the source does not carry; an empty class_group beside class_number > 1
   means the group structure is not recorded */
fixture_file load_fixture(const std::string& path);

/* consistency violations as "field.path: message" lines; empty = valid.
   Checks degree/signature arithmetic, class data when recorded, and that
   every stored unit really is one (|resultant with the defining
   polynomial| equals the denominator power) */
std::vector<std::string> validate_profile(const number_field_profile& F);

enum class profile_source { network, cache, fixture };

struct fetched_profile {
    number_field_profile profile;
    profile_source source = profile_source::fixture;
};

struct fetch_options {
    std::string base_url = "https://www.lmfdb.org";
    std::string cache_dir;    /* empty disables the cache */
    std::string fixture_path; /* empty disables fixture lookup */
    bool offline = false;     /* disables all network use */
    unsigned timeout_ms = 10000;
    unsigned retries = 2;
};

/* TAMEGAL_CACHE_DIR, TAMEGAL_FIXTURE, TAMEGAL_BASE_URL, TAMEGAL_OFFLINE */
fetch_options options_from_env();

/* key is an LMFDB-style label d.r.|disc|.i or a comma-separated integer
   coefficient list c0,...,cn of the defining polynomial. Order: cache,
   fixture, then network unless offline; a hit is written back to the
   cache (one JSON file per key, atomic temp-file rename) */
fetched_profile fetch_profile(const std::string& label_or_poly,
                              const fetch_options& opt);

/* canonical serialized record, the exact bytes the cache stores */
std::string profile_record_json(const number_field_profile& F);

} // namespace tamegal
