#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "artequity/corpus.hpp"

namespace testutil {

namespace corp = artequity::corpus;

inline corp::CleanArtist artist(std::string id, artequity::Gender g) {
    return {std::move(id), "", std::nullopt, g};
}

inline corp::ExhibitionEvent event(std::string artist_id, std::string institution_id, int year,
                                   int month = 6, int day = 15,
                                   corp::InstitutionType type = corp::InstitutionType::gallery,
                                   std::string country = "US") {
    return {std::move(artist_id), std::move(institution_id),
            artequity::Date{year, month, day}, type, std::move(country)};
}

inline corp::CleanCorpus make_corpus(std::vector<corp::CleanArtist> artists,
                                     std::vector<corp::ExhibitionEvent> exhibitions,
                                     std::vector<corp::AuctionRecord> auctions = {}) {
    corp::CleanCorpus c;
    c.artists = std::move(artists);
    c.exhibitions = std::move(exhibitions);
    c.auctions = std::move(auctions);
    std::size_t women = 0, men = 0;
    for (const auto& a : c.artists) (a.gender == artequity::Gender::woman ? women : men) += 1;
    c.women_fraction = corp::women_fraction(women, men);
    return c;
}

// Scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("artequity_test_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    std::string str() const { return path_.string(); }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace testutil
