#include "evslice/io_formats.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

#include <png.h>

#include "evslice/error.hpp"

namespace evslice {

namespace {

constexpr char kEventMagic[4] = {'E', 'V', 'S', 'T'};
constexpr char kTensorMagic[4] = {'L', 'A', 'T', '5'};
constexpr std::size_t kEventHeaderSize = 22;
constexpr std::size_t kEventRecordSize = 13;
constexpr std::size_t kTensorHeaderSize = 26;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(std::uint8_t(v & 0xFF));
    out.push_back(std::uint8_t(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i)
        out.push_back(std::uint8_t((v >> (8 * i)) & 0xFF));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i)
        out.push_back(std::uint8_t((v >> (8 * i)) & 0xFF));
}

std::uint16_t get_u16(const std::uint8_t* p) {
    return std::uint16_t(p[0] | (std::uint16_t(p[1]) << 8));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("cannot open " + path.string());
    in.seekg(0, std::ios::end);
    std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<std::uint8_t> data(static_cast<std::size_t>(size));
    if (size > 0)
        in.read(reinterpret_cast<char*>(data.data()), size);
    if (!in)
        fail("failed reading " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char*>(data.data()), std::streamsize(data.size()));
    out.flush();
    if (!out)
        fail("failed writing " + path.string());
}

std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void write_events(const std::filesystem::path& path, const EventStream& stream) {
    ValidationReport report = validate_stream(stream);
    if (!report.ok())
        fail("refusing to write invalid stream: event " +
             std::to_string(report.violations.front().index) + " breaks \"" +
             report.violations.front().rule + "\"");
    const auto& g = stream.geometry();
    if (g.width < 1 || g.height < 1 || g.width > 65535 || g.height > 65535)
        fail("geometry " + std::to_string(g.width) + "x" + std::to_string(g.height) +
             " does not fit the file header");

    std::vector<std::uint8_t> out;
    out.reserve(kEventHeaderSize + kEventRecordSize * stream.size());
    out.insert(out.end(), kEventMagic, kEventMagic + 4);
    put_u16(out, 1); // version
    put_u16(out, std::uint16_t(g.width));
    put_u16(out, std::uint16_t(g.height));
    put_u32(out, 0); // reserved
    put_u64(out, stream.size());
    for (const Event& e : stream.events()) {
        put_u64(out, e.t);
        put_u16(out, e.x);
        put_u16(out, e.y);
        out.push_back(std::uint8_t(e.p));
    }
    write_file(path, out);
}

EventStream read_events(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = read_file(path);
    const std::string name = path.string();
    if (data.size() < kEventHeaderSize)
        fail(name + ": truncated header (" + std::to_string(data.size()) +
             " bytes, need " + std::to_string(kEventHeaderSize) + ")");
    if (std::memcmp(data.data(), kEventMagic, 4) != 0)
        fail(name + ": bad magic at byte 0");
    if (get_u16(data.data() + 4) != 1)
        fail(name + ": unsupported version " + std::to_string(get_u16(data.data() + 4)) +
             " at byte 4");
    SensorGeometry g;
    g.width = get_u16(data.data() + 6);
    g.height = get_u16(data.data() + 8);
    if (g.width < 1)
        fail(name + ": zero width at byte 6");
    if (g.height < 1)
        fail(name + ": zero height at byte 8");
    const std::uint64_t count = get_u64(data.data() + 14);
    const std::uint64_t expected = kEventHeaderSize + count * kEventRecordSize;
    if (data.size() != expected)
        fail(name + ": payload is " + std::to_string(data.size()) + " bytes, header says " +
             std::to_string(expected));

    std::vector<Event> events(count);
    std::uint64_t prev_t = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
        const std::size_t off = kEventHeaderSize + i * kEventRecordSize;
        const std::uint8_t* rec = data.data() + off;
        Event e;
        e.t = get_u64(rec);
        e.x = get_u16(rec + 8);
        e.y = get_u16(rec + 10);
        e.p = std::int8_t(rec[12]);
        if (i > 0 && e.t < prev_t)
            fail(name + ": timestamp goes backwards at byte " + std::to_string(off));
        if (e.x >= g.width)
            fail(name + ": x=" + std::to_string(e.x) + " outside width " +
                 std::to_string(g.width) + " at byte " + std::to_string(off + 8));
        if (e.y >= g.height)
            fail(name + ": y=" + std::to_string(e.y) + " outside height " +
                 std::to_string(g.height) + " at byte " + std::to_string(off + 10));
        if (e.p != -1 && e.p != 1)
            fail(name + ": polarity " + std::to_string(int(e.p)) + " at byte " +
                 std::to_string(off + 12));
        prev_t = e.t;
        events[i] = e;
    }
    return EventStream::unchecked(g, std::move(events));
}

CsvReadResult read_events_csv(const std::filesystem::path& path, SensorGeometry geometry,
                              bool map_zero_to_negative) {
    if (geometry.width < 1 || geometry.height < 1)
        fail("csv reader needs a valid sensor geometry");
    std::ifstream in(path);
    if (!in)
        fail("cannot open " + path.string());
    const std::string name = path.string();

    auto parse_int = [&](const std::string& field, std::size_t line,
                         long long lo, long long hi, const char* what) {
        long long v = 0;
        auto res = std::from_chars(field.data(), field.data() + field.size(), v);
        if (res.ec != std::errc() || res.ptr != field.data() + field.size())
            fail(name + " line " + std::to_string(line) + ": bad " + what + " \"" +
                 field + "\"");
        if (v < lo || v > hi)
            fail(name + " line " + std::to_string(line) + ": " + what + " " +
                 std::to_string(v) + " out of range");
        return v;
    };

    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<Event> events;
    bool sorted = true;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        if (!have_header) {
            if (line != "t_us,x,y,p")
                fail(name + " line 1: expected header \"t_us,x,y,p\", got \"" + line + "\"");
            have_header = true;
            continue;
        }
        std::string fields[4];
        std::size_t start = 0;
        for (int f = 0; f < 4; ++f) {
            std::size_t comma = line.find(',', start);
            if (f < 3 && comma == std::string::npos)
                fail(name + " line " + std::to_string(line_no) + ": expected 4 fields");
            if (f == 3 && comma != std::string::npos)
                fail(name + " line " + std::to_string(line_no) + ": too many fields");
            fields[f] = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start);
            start = comma + 1;
        }
        Event e;
        e.t = std::uint64_t(parse_int(fields[0], line_no, 0,
                                      std::numeric_limits<long long>::max(), "t_us"));
        e.x = std::uint16_t(parse_int(fields[1], line_no, 0, geometry.width - 1, "x"));
        e.y = std::uint16_t(parse_int(fields[2], line_no, 0, geometry.height - 1, "y"));
        long long p = parse_int(fields[3], line_no, -1, 1, "p");
        if (p == 0) {
            if (!map_zero_to_negative)
                fail(name + " line " + std::to_string(line_no) +
                     ": polarity 0 (use the zero-to-negative mapping for {0,1} files)");
            p = -1;
        }
        e.p = std::int8_t(p);
        if (!events.empty() && e.t < events.back().t)
            sorted = false;
        events.push_back(e);
    }
    if (!have_header)
        fail(name + ": missing header line \"t_us,x,y,p\"");

    CsvReadResult result;
    result.resorted = !sorted;
    result.stream = EventStream::create(geometry, std::move(events),
                                        UnsortedPolicy::StableSort);
    return result;
}

void write_tensor(const std::filesystem::path& path, const LatentTensor5& tensor) {
    tensor.validate();
    std::vector<std::uint8_t> out;
    out.reserve(kTensorHeaderSize + 4 * tensor.size());
    out.insert(out.end(), kTensorMagic, kTensorMagic + 4);
    put_u16(out, 1);
    put_u32(out, std::uint32_t(tensor.b));
    put_u32(out, std::uint32_t(tensor.t));
    put_u32(out, std::uint32_t(tensor.c));
    put_u32(out, std::uint32_t(tensor.h));
    put_u32(out, std::uint32_t(tensor.w));
    for (float v : tensor.values) {
        std::uint32_t bits;
        std::memcpy(&bits, &v, 4);
        put_u32(out, bits);
    }
    write_file(path, out);
}

LatentTensor5 read_tensor(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> data = read_file(path);
    const std::string name = path.string();
    if (data.size() < kTensorHeaderSize)
        fail(name + ": truncated header");
    if (std::memcmp(data.data(), kTensorMagic, 4) != 0)
        fail(name + ": bad magic at byte 0");
    if (get_u16(data.data() + 4) != 1)
        fail(name + ": unsupported version at byte 4");
    std::uint64_t dims[5];
    for (int i = 0; i < 5; ++i)
        dims[i] = get_u32(data.data() + 6 + 4 * i);
    std::uint64_t total = 1;
    for (std::uint64_t d : dims) {
        if (d == 0)
            fail(name + ": zero dimension in header");
        total *= d;
        if (total > (1ull << 32))
            fail(name + ": tensor too large");
    }
    if (data.size() != kTensorHeaderSize + 4 * total)
        fail(name + ": payload is " + std::to_string(data.size() - kTensorHeaderSize) +
             " bytes, dims imply " + std::to_string(4 * total));

    LatentTensor5 t;
    t.b = int(dims[0]);
    t.t = int(dims[1]);
    t.c = int(dims[2]);
    t.h = int(dims[3]);
    t.w = int(dims[4]);
    t.values.resize(std::size_t(total));
    for (std::uint64_t i = 0; i < total; ++i) {
        std::uint32_t bits = get_u32(data.data() + kTensorHeaderSize + 4 * i);
        float v;
        std::memcpy(&v, &bits, 4);
        if (!std::isfinite(v))
            fail(name + ": non-finite value at byte " +
                 std::to_string(kTensorHeaderSize + 4 * i));
        t.values[std::size_t(i)] = v;
    }
    if (t.t < 3)
        fail(name + ": T dimension must be >= 3, got " + std::to_string(t.t));
    return t;
}

namespace {

struct PngReadCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCtx() {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp)
            std::fclose(fp);
    }
};

struct PngWriteCtx {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngWriteCtx() {
        if (png)
            png_destroy_write_struct(&png, info ? &info : nullptr);
        if (fp)
            std::fclose(fp);
    }
};

} // namespace

void write_png(const std::filesystem::path& path, const ImageU8& image) {
    if (image.width < 1 || image.height < 1 ||
        (image.channels != 1 && image.channels != 3))
        fail("write_png: bad image shape");
    if (image.pixels.size() != std::size_t(image.width) * image.height * image.channels)
        fail("write_png: pixel buffer does not match dimensions");

    PngWriteCtx ctx;
    ctx.fp = std::fopen(path.string().c_str(), "wb");
    if (!ctx.fp)
        fail("cannot open " + path.string() + " for writing");
    ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png)
        fail("png_create_write_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info)
        fail("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        fail("png write failed for " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_IHDR(ctx.png, ctx.info, png_uint_32(image.width), png_uint_32(image.height), 8,
                 image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(ctx.png, ctx.info);
    for (int y = 0; y < image.height; ++y)
        png_write_row(ctx.png, const_cast<png_bytep>(image.row(y)));
    png_write_end(ctx.png, nullptr);
    if (std::fflush(ctx.fp) != 0)
        fail("failed writing " + path.string());
}

ImageU8 read_png(const std::filesystem::path& path) {
    PngReadCtx ctx;
    ctx.fp = std::fopen(path.string().c_str(), "rb");
    if (!ctx.fp)
        fail("cannot open " + path.string());
    png_byte sig[8];
    if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8) != 0)
        fail(path.string() + ": not a PNG file");
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png)
        fail("png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info)
        fail("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        fail("png read failed for " + path.string());

    png_init_io(ctx.png, ctx.fp);
    png_set_sig_bytes(ctx.png, 8);
    png_read_info(ctx.png, ctx.info);

    const png_byte color = png_get_color_type(ctx.png, ctx.info);
    const png_byte depth = png_get_bit_depth(ctx.png, ctx.info);
    if (color == PNG_COLOR_TYPE_PALETTE)
        png_set_palette_to_rgb(ctx.png);
    if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
        png_set_expand_gray_1_2_4_to_8(ctx.png);
    if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
        png_set_tRNS_to_alpha(ctx.png);
    if (depth == 16)
        png_set_strip_16(ctx.png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
        png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    const int w = int(png_get_image_width(ctx.png, ctx.info));
    const int h = int(png_get_image_height(ctx.png, ctx.info));
    const int channels = int(png_get_channels(ctx.png, ctx.info));
    if (channels != 1 && channels != 3)
        fail(path.string() + ": unsupported channel count after normalization");

    ImageU8 image = ImageU8::make(w, h, channels);
    for (int y = 0; y < h; ++y)
        png_read_row(ctx.png, image.row(y), nullptr);
    png_read_end(ctx.png, nullptr);
    return image;
}

void write_manifest_csv(const std::filesystem::path& path, const SliceManifest& manifest) {
    std::string out = "index,t_start_us,t_end_us,regime,theta,M,event_count,path\n";
    for (const SliceRecord& r : manifest.records) {
        out += std::to_string(r.index);
        out += ',';
        out += std::to_string(r.t_start_us);
        out += ',';
        out += std::to_string(r.t_end_us);
        out += ',';
        out += regime_name(r.regime);
        out += ',';
        out += fmt_double(r.theta);
        out += ',';
        out += std::to_string(r.target_count);
        out += ',';
        out += std::to_string(r.event_count);
        out += ',';
        out += r.path;
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        fail("cannot open " + path.string() + " for writing");
    f.write(out.data(), std::streamsize(out.size()));
    f.flush();
    if (!f)
        fail("failed writing " + path.string());
}

SliceManifest read_manifest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot open " + path.string());
    const std::string name = path.string();
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    SliceManifest manifest;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        if (!have_header) {
            if (line != "index,t_start_us,t_end_us,regime,theta,M,event_count,path")
                fail(name + " line " + std::to_string(line_no) +
                     ": unexpected manifest header");
            have_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (int f = 0; f < 7; ++f) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string::npos)
                fail(name + " line " + std::to_string(line_no) + ": expected 8 columns");
            fields.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        fields.push_back(line.substr(start)); // path may contain commas

        auto to_i64 = [&](const std::string& s, const char* what) {
            long long v = 0;
            auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (res.ec != std::errc() || res.ptr != s.data() + s.size())
                fail(name + " line " + std::to_string(line_no) + ": bad " + what);
            return v;
        };

        SliceRecord r;
        r.index = int(to_i64(fields[0], "index"));
        r.t_start_us = std::uint64_t(to_i64(fields[1], "t_start_us"));
        r.t_end_us = std::uint64_t(to_i64(fields[2], "t_end_us"));
        if (fields[3] == "intersect")
            r.regime = Regime::Intersect;
        else if (fields[3] == "union")
            r.regime = Regime::Union;
        else
            fail(name + " line " + std::to_string(line_no) + ": bad regime \"" +
                 fields[3] + "\"");
        double theta = 0;
        auto res = std::from_chars(fields[4].data(), fields[4].data() + fields[4].size(),
                                   theta);
        if (res.ec != std::errc() || res.ptr != fields[4].data() + fields[4].size())
            fail(name + " line " + std::to_string(line_no) + ": bad theta");
        r.theta = theta;
        r.target_count = to_i64(fields[5], "M");
        r.event_count = std::uint64_t(to_i64(fields[6], "event_count"));
        r.path = fields[7];
        manifest.records.push_back(r);
    }
    return manifest;
}

} // namespace evslice
