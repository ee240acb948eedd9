#pragma once

#include <optional>
#include <string>
#include <vector>

#include "artequity/careers.hpp"
#include "artequity/corpus.hpp"

namespace artequity::auctions {

// One disparity-table row: per-gender values and the man/woman ratio.
struct GenderedMetric {
    std::string name;
    double men = 0.0;
    double women = 0.0;
    std::optional<double> ratio; // absent when the woman value is zero
    std::string ratio_reason;    // set when ratio is absent
};

GenderedMetric gendered_metric(std::string name, double men, double women);

struct DisparityReport {
    GenderedMetric population;         // exhibiting artists
    GenderedMetric exhibitions;        // exhibition count
    GenderedMetric auction_population; // artists with >= 1 auction record
    GenderedMetric access_rate;        // auctioned / exhibiting, per gender
    GenderedMetric auction_records;    // record count
    GenderedMetric avg_price;          // mean normalized price over records
    GenderedMetric avg_auctions;       // records per auctioned artist
    GenderedMetric total_sales;        // sum of normalized prices

    std::vector<const GenderedMetric*> rows() const;
};

DisparityReport disparity_report(const corpus::CleanCorpus& corpus);

// Binned auction-access rate against a career feature, per gender.
struct CurvePoint {
    std::string feature; // career_length | exhibitions_per_year
    double bin_low = 0.0;
    double bin_high = 0.0;
    Gender gender = Gender::unknown;
    long long n = 0;
    std::optional<double> access_rate; // absent for empty bins
};

struct CurveBinning {
    int bins = 10;
    long long min_support = 5; // bins below this are low-support (see README)
};

std::vector<CurvePoint> access_rate_curves(const corpus::CleanCorpus& corpus,
                                           const std::vector<careers::CareerFeatures>& features,
                                           const CurveBinning& binning = {});

void write_disparity_json(const std::string& path, const DisparityReport& report,
                          const std::string& config_digest);
DisparityReport load_disparity_json(const std::string& path);

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& points,
                      const std::string& config_digest);

} // namespace artequity::auctions
