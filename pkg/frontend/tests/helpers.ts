import { vi } from "vitest";
import type { Catalog, CatalogItem, ScreeningResult } from "../src/api";

export function makeCatalog(locale: "en" | "hi" = "en", nItems = 20): Catalog {
  const texts = {
    en: (code: string) => `Question about ${code}?`,
    hi: (code: string) => `${code} के बारे में प्रश्न?`,
  };
  const labels = {
    en: { yes: "Yes", no: "No" },
    hi: { yes: "हाँ", no: "नहीं" },
  };
  const codes = [
    "New1a3", "New1a4", "New1a5", "New1a7",
    "New1b1", "New1b2", "New1b3",
    "New1c1",
    "New2a1", "New2a3", "New2a4", "New2a5", "New2a6", "New2a7",
    "New2b", "New2c",
    "New2d1", "New2d2", "New2d3", "New2d4",
  ].slice(0, nItems);
  const items: CatalogItem[] = codes.map((code) => ({
    code,
    kind: "choice",
    text: texts[locale](code),
    options: [
      { value: "yes", encoding: 1, label: labels[locale].yes },
      { value: "no", encoding: 0, label: labels[locale].no },
    ],
  }));
  return { version: "1", locale, items };
}

export function makeResult(overrides: Partial<ScreeningResult> = {}): ScreeningResult {
  return {
    label: "TD",
    probability: 0.87,
    probabilities: { ASD: 0.13, TD: 0.87 },
    model_family: "SVM",
    model_version: "1",
    catalog_version: "1",
    disclaimer: "Screening aid only; consult a clinician.",
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

export interface FetchScript {
  catalog?: (locale: string) => Response | Promise<Response>;
  screen?: (body: unknown) => Response | Promise<Response>;
}

export function stubFetch(script: FetchScript): ReturnType<typeof vi.fn> {
  const impl = vi.fn(async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    if (url.includes("/catalog")) {
      const locale = new URL(url, "http://test").searchParams.get("locale") ?? "en";
      if (!script.catalog) return jsonResponse(makeCatalog(locale as "en" | "hi"));
      return script.catalog(locale);
    }
    if (url.includes("/screen")) {
      const body = init?.body ? JSON.parse(String(init.body)) : {};
      if (!script.screen) return jsonResponse(makeResult());
      return script.screen(body);
    }
    if (url.includes("/health")) return jsonResponse({ status: "ok" });
    throw new Error(`unexpected fetch ${url}`);
  });
  vi.stubGlobal("fetch", impl);
  return impl;
}

export function click(el: Element | null): void {
  if (!el) throw new Error("element not found");
  (el as HTMLElement).click();
}

export function query<T extends Element = HTMLElement>(root: ParentNode, selector: string): T {
  const node = root.querySelector<T>(selector);
  if (!node) throw new Error(`missing element: ${selector}`);
  return node;
}

export async function flush(): Promise<void> {
  await Promise.resolve();
  await Promise.resolve();
  await new Promise((resolve) => setTimeout(resolve, 0));
}
