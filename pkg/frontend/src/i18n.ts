// Every user-visible string lives here, keyed per locale. Question texts
// and option labels arrive already localized from /catalog.

import type { Locale } from "./api";

export const STRINGS = {
  en: {
    appTitle: "Screening questionnaire",
    intro: "Answer each question about the child. Your answers stay in this browser tab until you submit.",
    start: "Start",
    next: "Next",
    back: "Back",
    submit: "Submit answers",
    submitting: "Submitting…",
    progress: "Question {current} of {total}",
    review: "Review",
    reviewHint: "All questions answered. Submit to see the screening result.",
    unansweredHint: "Unanswered questions remain:",
    resultTitle: "Screening result",
    resultProbability: "Model confidence",
    startOver: "Start over",
    localeToggle: "हिन्दी",
    catalogError: "The questionnaire could not be loaded.",
    retry: "Try again",
    maintenance: "The screening service is temporarily unavailable. Please try again later.",
    networkError: "Your answers could not be submitted. Check your connection and try again.",
    validationError: "Some answers were not accepted. Please review the highlighted question.",
    ageUnit: "months",
  },
  hi: {
    appTitle: "स्क्रीनिंग प्रश्नावली",
    intro: "बच्चे के बारे में हर प्रश्न का उत्तर दें। सबमिट करने तक आपके उत्तर इसी ब्राउज़र टैब में रहते हैं।",
    start: "शुरू करें",
    next: "आगे",
    back: "पीछे",
    submit: "उत्तर सबमिट करें",
    submitting: "सबमिट हो रहा है…",
    progress: "प्रश्न {current} / {total}",
    review: "समीक्षा",
    reviewHint: "सभी प्रश्नों के उत्तर मिल गए। परिणाम देखने के लिए सबमिट करें।",
    unansweredHint: "इन प्रश्नों के उत्तर बाकी हैं:",
    resultTitle: "स्क्रीनिंग परिणाम",
    resultProbability: "मॉडल विश्वसनीयता",
    startOver: "फिर से शुरू करें",
    localeToggle: "English",
    catalogError: "प्रश्नावली लोड नहीं हो सकी।",
    retry: "फिर कोशिश करें",
    maintenance: "स्क्रीनिंग सेवा अभी उपलब्ध नहीं है। कृपया बाद में प्रयास करें।",
    networkError: "आपके उत्तर सबमिट नहीं हो सके। कनेक्शन जाँच कर फिर कोशिश करें।",
    validationError: "कुछ उत्तर स्वीकार नहीं हुए। कृपया चिह्नित प्रश्न देखें।",
    ageUnit: "महीने",
  },
} as const;

export type StringKey = keyof (typeof STRINGS)["en"];

export function t(locale: Locale, key: StringKey, vars?: Record<string, string | number>): string {
  let text: string = STRINGS[locale][key];
  if (vars) {
    for (const [name, value] of Object.entries(vars)) {
      text = text.replace(`{${name}}`, String(value));
    }
  }
  return text;
}
