#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace toolspan::annotate {

enum class PromptKind { Judge, Convert };

inline constexpr std::string_view kPlaceholder = "PLACEHOLDER";

// Byte-identical to assets/prompts/judge.txt.
inline constexpr std::string_view kJudgePrompt = R"PROMPT(Your task is to determine whether you can add calls to a Python API to a piece of text. The calls should help you get information required to complete the text. You only need to respond with "Yes" or "No", "Yes" means you can and "No" means you can't. Here are some examples:

Input: 

{"messages": [{"role": "user", "content": "Sort the numbers in the list arr = [1, 10, 2, 5, -2, 11, 12] in descending order."}, {"role": "assistant", "content": "The sorted list in descending order is: [12, 11, 10, 5, 2, 1, -2]."}]}

Output:

Yes

Input: 

{"messages": [{"role": "user", "content": "Can you tell me a little bit about what LaTeX is?"}, {"role": "assistant", "content": "LaTeX is a high-quality typesetting system; it includes features designed for the production of technical and scientific documentation. LaTeX is the de facto standard for the communication and publication of scientific documents. It is widely used by mathematicians, scientists, engineers, philosophers, linguists, economists, and other scholars in academia and the professional world."}]}

Output:

No

Input: 

{"messages": [{"role": "user", "content": "What is the value of sin 40 degrees plus cos 31 degrees?"}, {"role": "assistant", "content": "The value is approximately sin 40 + cos 31 = 0.6428 + 0.8572 = 1.500."}]}

Output:

Yes

Input:

{"messages": [{"role": "user", "content": "Write a Python script that reads an image and recognizes the text on it."}, {"role": "assistant", "content": "To read an image and recognize text on it in Python, you can use the pytesseract library along with Pillow for image processing. Here's a simple example: \nimport pytesseract; from PIL import Image; print(pytesseract.image_to_string(Image.open('path_to_image.jpg'))). \nMake sure you have Tesseract OCR installed on your machine and the required libraries (pytesseract and Pillow) installed in your Python environment. You can install them using: \npip install pytesseract pillow"}]}

Output:

No

Input:

PLACEHOLDER

Output:)PROMPT";

// Byte-identical to assets/prompts/convert.txt.
inline constexpr std::string_view kConvertPrompt = R"PROMPT(Your task is to add calls to a Python API to a piece of text. The calls should help you get information required to complete the text. You can call the API by writing "<python>code</python>" where "code" is the code to be executed. The last line of all code should print the variable that stores the final result. Here are some examples of API calls:

Input: 

{"messages": [{"role": "user", "content": "Which number is greater, 13.11 or 13.8?"}, {"role": "assistant", "content": "13.8 is greater than 13.11."}]}

Output: 

{"messages": [{"role": "user", "content": "Which number is greater, 13.11 or 13.8?"}, {"role": "assistant", "content": "<python>greater_number = max(13.11, 13.8)\nprint(greater_number)</python> 13.8 is greater than 13.11."}]}

Input: 

{"messages": [{"role": "user", "content": "How many unique words are there in the sentence 'The quick brown fox jumps over the lazy dog'?"}, {"role": "assistant", "content": "There are eight unique words in the sentence 'The quick brown fox jumps over the lazy dog.'"}]}

Output:

{"messages": [{"role": "user", "content": "How many unique words are there in the sentence 'The quick brown fox jumps over the lazy dog'?"}, {"role": "assistant", "content": "There are <python>unique_words = len(set('The quick brown fox jumps over the lazy dog'.lower().split()))\nprint(unique_words)</python> eight unique words in the sentence 'The quick brown fox jumps over the lazy dog.'"}]}

Input:

{"messages": [{"role": "user", "content": "What is the area of a circle with a radius of 5?"}, {"role": "assistant", "content": "The area of a circle with radius 5 is 78.54."}]}

Output:

{"messages": [{"role": "user", "content": "What is the area of a circle with a radius of 5?"}, {"role": "assistant", "content": "The area of a circle with radius 5 is <python>import math\narea = math.pi * 5**2\nprint(area)</python> 78.54."}]}

Input:

{"messages": [{"role": "user", "content": "Sort the numbers [5, 3, 8, 1, 2] in ascending order."}, {"role": "assistant", "content": "The sorted list is [1, 2, 3, 5, 8]."}]}

Output:

{"messages": [{"role": "user", "content": "Sort the numbers [5, 3, 8, 1, 2] in ascending order."}, {"role": "assistant", "content": "The sorted list is <python>lst = sorted([5, 3, 8, 1, 2])\nprint(lst)</python> [1, 2, 3, 5, 8]."}]}

Input:

{"messages": [{"role": "user", "content": "Extract the domain from the email 'example@test.com'."}, {"role": "assistant", "content": "The domain of the email 'example@test.com' is 'test.com'."}]}

Output:

{"messages": [{"role": "user", "content": "Extract the domain from the email 'example@test.com'."}, {"role": "assistant", "content": "The domain of the email 'example@test.com' is <python>domain = 'example@test.com'.split('@')[1]\nprint(domain)</python> 'test.com'."}]}

Input:

PLACEHOLDER

Output:)PROMPT";

inline std::string_view prompt_body(PromptKind kind) {
    return kind == PromptKind::Judge ? kJudgePrompt : kConvertPrompt;
}

// Substitutes the single placeholder slot with `payload`.
inline std::string fill_prompt(PromptKind kind, std::string_view payload) {
    const auto body = prompt_body(kind);
    const auto at = body.find(kPlaceholder);
    if (at == std::string_view::npos || body.find(kPlaceholder, at + 1) != std::string_view::npos)
        throw std::logic_error("prompt template must hold exactly one placeholder");
    std::string out;
    out.reserve(body.size() + payload.size());
    out.append(body.substr(0, at));
    out.append(payload);
    out.append(body.substr(at + kPlaceholder.size()));
    return out;
}

}  // namespace toolspan::annotate
