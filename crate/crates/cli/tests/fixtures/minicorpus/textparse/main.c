#include "tokenizer.h"
#include <stdio.h>

extern void count_text(const char *input_text, long *word_count, long *sentence_count);

int main(void)
{
    const char *sample_text = "Hello tokenizer world. How many words are here?";
    long word_count = 0;
    long sentence_count = 0;
    count_text(sample_text, &word_count, &sentence_count);
    printf("words=%ld sentences=%ld\n", word_count, sentence_count);
    return 0;
}
