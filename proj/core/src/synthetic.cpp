#include "loganom/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "loganom/errors.hpp"
#include "loganom/rng.hpp"

namespace loganom {
namespace {

// Fixed inlier population: a handful of (user, program, host, service)
// profiles connecting during working hours. These constants define the
// whole synthetic world; everything rare (unfamiliar users, unregistered
// service names, small-hours logins) is reserved for planted anomalies.
struct Profile {
  const char* user;
  const char* program;
  const char* host;
  const char* service;
};

constexpr Profile kProfiles[] = {
    {"merge", "python", "p012.internal", "CMSR.internal"},
    {"etl_batch", "java", "batch03.internal", "ATLR.internal"},
    {"webapp", "httpd", "web01.internal", "WEBP.internal"},
    {"backup", "rman", "bkp02.internal", "BKPD.internal"},
    {"analyst", "sqlplus", "ws113.internal", "ADGR.internal"},
    {"monitor", "perl", "mon01.internal", "MONP.internal"},
};
constexpr int kNumProfiles = 6;

// Traffic share per profile. Exactly equal shares would make the frequency
// features constant across inliers, so a mild skew keeps those columns
// carrying real variance without letting any one profile dominate.
constexpr double kProfileWeights[kNumProfiles] = {0.18, 0.175, 0.17,
                                                  0.165, 0.16, 0.15};

// Working week the generator lives in (a Monday, CET).
constexpr const char* kBaseMidnight = "2017-09-25T00:00:00+0200";
constexpr int kOffsetMinutes = 120;
constexpr double kInlierHourMean = 13.0;
constexpr double kInlierHourStddev = 2.2;
constexpr double kInlierHourMin = 7.0;
constexpr double kInlierHourMax = 19.0;
constexpr int kEphemeralPortMin = 20000;
constexpr int kEphemeralPortMax = 60000;

// Archetype constants.
constexpr const char* kBurstUser = "appmon";
constexpr const char* kBurstHost = "v-badhost.internal";
constexpr const char* kBurstService = "XDBE.internal";
constexpr const char* kOffHoursUser = "j.doe";
constexpr const char* kOffHoursProgram = "sqlplus";
constexpr const char* kOffHoursHost = "laptop-77.internal";
constexpr double kOffHoursMin = 0.5;
constexpr double kOffHoursMax = 5.5;
constexpr const char* kScanUser = "svc_scan";

ConnectionRecord base_record() {
  ConnectionRecord rec;
  rec.oracle_sid = "PROD_01";
  rec.listener_name = "listener_scan1";
  rec.database_type = "oracle";
  rec.producer = "oracle";
  rec.source_type = "listener";
  rec.hostname = "dbs01.internal";
  rec.flume_agent_version = "0.1.6-7";
  rec.connect_data_server = "DEDICATED";
  rec.client_protocol = "tcp";
  rec.type = "establish";
  rec.return_code = 0;
  return rec;
}

void set_timestamp(ConnectionRecord& rec, std::int64_t base_epoch, int day,
                   double hour_of_day) {
  const std::int64_t epoch =
      base_epoch + day * 86400LL + static_cast<std::int64_t>(hour_of_day * 3600.0);
  Timestamp ts;
  ts.epoch_seconds = epoch;
  ts.offset_minutes = kOffsetMinutes;
  ts.raw = format_timestamp(epoch, kOffsetMinutes);
  rec.event_timestamp = ts;
}

std::string random_ip(Rng& rng) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "10.16.%d.%d",
                static_cast<int>(uniform_int(rng, 0, 255)),
                static_cast<int>(uniform_int(rng, 1, 254)));
  return buf;
}

double inlier_hour(Rng& rng) {
  const double h = kInlierHourMean + kInlierHourStddev * gaussian(rng);
  return std::clamp(h, kInlierHourMin, kInlierHourMax);
}

int pick_profile(Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (int i = 0; i < kNumProfiles; ++i) {
    acc += kProfileWeights[i];
    if (u < acc) return i;
  }
  return kNumProfiles - 1;
}

ConnectionRecord make_inlier(Rng& rng, std::int64_t base_epoch) {
  const Profile& p = kProfiles[pick_profile(rng)];
  ConnectionRecord rec = base_record();
  rec.client_user = p.user;
  rec.client_program = p.program;
  rec.client_host = p.host;
  rec.service_name = p.service;
  rec.connect_data_service_name = p.service;
  rec.client_ip = random_ip(rng);
  rec.client_port =
      static_cast<int>(uniform_int(rng, kEphemeralPortMin, kEphemeralPortMax));
  set_timestamp(rec, base_epoch, static_cast<int>(uniform_int(rng, 0, 4)),
                inlier_hour(rng));
  return rec;
}

ConnectionRecord make_outlier(Rng& rng, std::int64_t base_epoch,
                              Archetype archetype, int ordinal) {
  ConnectionRecord rec = base_record();
  switch (archetype) {
    case Archetype::ReconnectBurst: {
      // One client host hammering the listener: second-spaced establish
      // events from an unfamiliar host asking for a service nobody else
      // uses, reconnecting because the request never succeeds.
      rec.client_user = kBurstUser;
      rec.client_program = "python";
      rec.client_host = kBurstHost;
      rec.service_name = kBurstService;
      rec.connect_data_service_name = kBurstService;
      rec.client_ip = "10.16.66.6";
      rec.client_port = static_cast<int>(
          uniform_int(rng, kEphemeralPortMin, kEphemeralPortMax));
      set_timestamp(rec, base_epoch, 2, 14.0 + ordinal / 3600.0);
      break;
    }
    case Archetype::OffHoursLogin: {
      const Profile& p = kProfiles[ordinal % kNumProfiles];
      rec.client_user = kOffHoursUser;
      rec.client_program = kOffHoursProgram;
      rec.client_host = kOffHoursHost;
      rec.service_name = p.service;
      rec.connect_data_service_name = p.service;
      rec.client_ip = random_ip(rng);
      rec.client_port = static_cast<int>(
          uniform_int(rng, kEphemeralPortMin, kEphemeralPortMax));
      set_timestamp(rec, base_epoch, static_cast<int>(uniform_int(rng, 0, 4)),
                    uniform_real(rng, kOffHoursMin, kOffHoursMax));
      break;
    }
    case Archetype::ResourceScan: {
      // One user sweeping the whole service catalog from a different host
      // each time.
      char host[32];
      std::snprintf(host, sizeof host, "scan-%02d.internal", ordinal);
      const char* service = kProfiles[ordinal % kNumProfiles].service;
      rec.client_user = kScanUser;
      rec.client_program = "python";
      rec.client_host = host;
      rec.service_name = service;
      rec.connect_data_service_name = service;
      rec.client_ip = random_ip(rng);
      rec.client_port = static_cast<int>(
          uniform_int(rng, kEphemeralPortMin, kEphemeralPortMax));
      // A scripted sweep runs overnight, outside business hours.
      double hour = uniform_real(rng, 20.0, 29.0);
      if (hour >= 24.0) hour -= 24.0;
      set_timestamp(rec, base_epoch, static_cast<int>(uniform_int(rng, 0, 4)),
                    hour);
      break;
    }
  }
  return rec;
}

// Largest-remainder apportionment of `total` over normalized weights.
std::array<std::size_t, 3> apportion(std::size_t total,
                                     const std::array<double, 3>& weights) {
  const double sum = weights[0] + weights[1] + weights[2];
  std::array<std::size_t, 3> counts{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    const double exact = total * weights[i] / sum;
    counts[i] = static_cast<std::size_t>(exact);
    remainder[i] = exact - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  while (assigned < total) {
    int best = 0;
    for (int i = 1; i < 3; ++i)
      if (remainder[i] > remainder[best]) best = i;
    ++counts[best];
    remainder[best] = -1.0;
    ++assigned;
  }
  return counts;
}

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticConfig& config) {
  if (config.n_records < 10)
    throw ConfigInvalid("n_records must be >= 10");
  if (!(config.outlier_fraction >= 0.0 && config.outlier_fraction < 0.5))
    throw ConfigInvalid("outlier_fraction must be in [0, 0.5)");
  double weight_sum = 0.0;
  for (double w : config.archetype_mix) {
    if (w < 0.0 || !std::isfinite(w))
      throw ConfigInvalid("archetype weights must be nonnegative");
    weight_sum += w;
  }
  if (weight_sum <= 0.0) throw ConfigInvalid("archetype weights sum to zero");

  const std::size_t n = config.n_records;
  const std::size_t n_out =
      static_cast<std::size_t>(static_cast<double>(n) * config.outlier_fraction);
  const auto per_archetype = apportion(n_out, config.archetype_mix);
  const std::int64_t base_epoch = parse_timestamp(kBaseMidnight).epoch_seconds;

  Rng rng = make_rng(config.seed, "synthetic");

  // Choose outlier positions by partial Fisher-Yates so the planted records
  // are interleaved with inliers deterministically.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = 0; i < n_out; ++i) {
    const std::size_t j = i + uniform_int(rng, 0, n - 1 - i);
    std::swap(order[i], order[j]);
  }
  std::vector<int> archetype_at(n, -1);
  {
    std::size_t cursor = 0;
    for (int a = 0; a < 3; ++a)
      for (std::size_t c = 0; c < per_archetype[a]; ++c)
        archetype_at[order[cursor++]] = a;
  }

  SyntheticDataset out;
  out.records.reserve(n);
  out.labels.assign(n, 0);
  std::array<int, 3> ordinal{0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    if (archetype_at[i] < 0) {
      out.records.push_back(make_inlier(rng, base_epoch));
    } else {
      const int a = archetype_at[i];
      out.records.push_back(
          make_outlier(rng, base_epoch, static_cast<Archetype>(a), ordinal[a]++));
      out.labels[i] = 1;
    }
  }
  return out;
}

}  // namespace loganom
