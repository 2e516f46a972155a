#include "mem_usage.h"
#include <stdio.h>
#include <string.h>

int read_mem_info(const char *meminfo_path, struct mem_snapshot *snapshot_out)
{
    FILE *meminfo_file = fopen(meminfo_path, "r");
    char line_buffer[128];
    int parsed_fields = 0;
    if (meminfo_file == NULL) {
        return -1;
    }
    memset(snapshot_out, 0, sizeof(*snapshot_out));
    while (fgets(line_buffer, sizeof(line_buffer), meminfo_file) != NULL) {
        long field_value = 0;
        if (sscanf(line_buffer, "MemTotal: %ld kB", &field_value) == 1) {
            snapshot_out->total_kilobytes = field_value;
            parsed_fields++;
        } else if (sscanf(line_buffer, "MemFree: %ld kB", &field_value) == 1) {
            snapshot_out->free_kilobytes = field_value;
            parsed_fields++;
        } else if (sscanf(line_buffer, "Cached: %ld kB", &field_value) == 1) {
            snapshot_out->cached_kilobytes = field_value;
            parsed_fields++;
        }
    }
    fclose(meminfo_file);
    return parsed_fields == 3 ? 0 : -1;
}

double memory_pressure(const struct mem_snapshot *snapshot)
{
    long available = snapshot->free_kilobytes + snapshot->cached_kilobytes;
    if (snapshot->total_kilobytes <= 0) {
        return 0.0;
    }
    return 1.0 - (double)available / (double)snapshot->total_kilobytes;
}
