#pragma once

#include <string>
#include <vector>

#include "rstar/corpus.hpp"

namespace rstar::testing {

inline corpus::PublicationRecord paper(const std::string& id, int year, const std::vector<std::string>& authors,
                                       std::int64_t citations = 0, const std::string& venue = "v") {
    corpus::PublicationRecord r;
    r.pub_id = id;
    r.year = year;
    r.title = "title " + id;
    r.venue_id = venue;
    r.citation_count = citations;
    for (const auto& a : authors) {
        corpus::AuthorRef ref;
        ref.author_id = a;
        ref.name = "Name " + a;
        r.authorships.push_back(ref);
    }
    return r;
}

} // namespace rstar::testing
