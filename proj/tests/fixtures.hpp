#pragma once

#include <string>
#include <vector>

#include "clinicsum/corpus.hpp"

// Shared fixtures: a staged oncology consultation (diarized turns, expected
// sentence chunks, a SOAP note a generator might produce for it) and a
// second staged respiratory consult note used by the parser tests.

namespace fixtures {

inline clinicsum::Transcript lung_cancer_transcript() {
    clinicsum::Transcript t;
    t.id = "lung-cancer-consult";
    t.specialty = "Respiratory";
    t.turns = {
        {"P", "Good morning, doctor."},
        {"D", "Good morning. What brings you here?"},
        {"P", "I've had a cough for about six months. Recently noticed some blood."},
        {"D", "Is it a dry or wet cough?"},
        {"P", "Mostly dry. But lately with some blood."},
        {"D", "How much blood are you coughing up?"},
        {"P", "About two or three teaspoons a day."},
        {"D", "Any shortness of breath or chest pain?"},
        {"P", "Shortness of breath, especially with activity. But no chest pain."},
        {"D", "Any recent weight loss?"},
        {"P", "Yes, around ten to fifteen pounds in the last two months."},
        {"D", "Do you smoke?"},
        {"P", "Yes, half a pack a day. I've been cutting down."},
        {"D", "We need to do a chest X-ray and sputum test. Lung cancer is a concern given your "
              "symptoms and smoking history."},
        {"P", "That makes sense. Thank you."},
        {"D", "We'll proceed with those tests and follow up. Take care."},
        {"P", "Thank you, doctor. Goodbye."},
        {"D", "Goodbye and take care."},
    };
    return t;
}

inline const std::vector<std::string>& lung_cancer_chunks() {
    static const std::vector<std::string> chunks = {
        "Good morning, doctor.",
        "Good morning.",
        "What brings you here?",
        "I've had a cough for about six months.",
        "Recently noticed some blood.",
        "Is it a dry or wet cough?",
        "Mostly dry.",
        "But lately with some blood.",
        "How much blood are you coughing up?",
        "About two or three teaspoons a day.",
        "Any shortness of breath or chest pain?",
        "Shortness of breath, especially with activity.",
        "But no chest pain.",
        "Any recent weight loss?",
        "Yes, around ten to fifteen pounds in the last two months.",
        "Do you smoke?",
        "Yes, half a pack a day.",
        "I've been cutting down.",
        "We need to do a chest X-ray and sputum test.",
        "Lung cancer is a concern given your symptoms and smoking history.",
        "That makes sense.",
        "Thank you.",
        "We'll proceed with those tests and follow up.",
        "Take care.",
        "Thank you, doctor.",
        "Goodbye.",
        "Goodbye and take care.",
    };
    return chunks;
}

inline const std::string& lung_cancer_soap_note() {
    static const std::string note =
        "Subjective:\n"
        "- Chief Complaint: Persistent cough for six months, with recent onset of blood in sputum\n"
        "- Cough: Mostly dry, with blood present (approximately two to three teaspoons daily)\n"
        "- Shortness of Breath: Noted, particularly with activity\n"
        "- Chest Pain: None reported\n"
        "- Weight Loss: Significant loss of 10-15 pounds over the past two months\n"
        "- Smoking History: Current smoker, approximately half a pack per day; attempting to reduce\n"
        "\n"
        "Objective:\n"
        "- General Appearance: Weight loss evident\n"
        "- Respiratory: Dry cough with recent hemoptysis. Shortness of breath noted on exertion\n"
        "- Vital Signs: [To be completed based on actual values]\n"
        "- Physical Exam: [To be completed based on findings, if available]\n"
        "\n"
        "Assessment:\n"
        "- Primary Concern: Hemoptysis with chronic cough, significant weight loss, shortness of "
        "breath, and smoking history raise concern for possible lung cancer\n"
        "- Differential Diagnosis: Lung cancer, chronic bronchitis, tuberculosis, or other "
        "respiratory pathology\n"
        "\n"
        "Plan:\n"
        "- Immediate Actions:\n"
        "  - Order Chest X-ray to assess for possible malignancy or other abnormalities\n"
        "  - Request Sputum Test to evaluate for infectious or malignant cells\n"
        "- Follow-Up: Schedule a follow-up appointment to review test results and determine "
        "further management\n"
        "- Patient Education: Discuss the importance of smoking cessation and provide resources "
        "for support in quitting\n";
    return note;
}

inline const std::string& asthma_consult_note() {
    static const std::string note =
        "Subjective:\n"
        "- Symptoms: Shortness of breath, wheezing, cough\n"
        "- Severity: Moderate\n"
        "- Duration: Past week\n"
        "- Associated symptoms: Wheezing, cough\n"
        "- Relevant medical history: Childhood asthma, no recent issues\n"
        "- Family history: Mother had asthma\n"
        "- Allergies: Allergic to pollen\n"
        "- Other concerns: Patient is seeking guidance on asthma management and alternative "
        "treatments\n"
        "\n"
        "Objective:\n"
        "- Physical examination findings: Wheezing on auscultation\n"
        "- Spirometry test planned for tomorrow\n"
        "- Blood tests planned for tomorrow\n"
        "\n"
        "Assessment:\n"
        "- Likely diagnosis: Asthma exacerbation\n"
        "- Differential diagnosis: Other conditions that may present with similar symptoms\n"
        "- Clinical impression: Patient has a history of asthma and is experiencing symptoms "
        "consistent with an asthma exacerbation\n"
        "\n"
        "Plan:\n"
        "- Spirometry test tomorrow\n"
        "- Blood tests tomorrow\n"
        "- Consider long-acting bronchodilator for daily management\n"
        "- Recommend short-acting bronchodilator for as needed use during episodes of shortness "
        "of breath\n"
        "- Discuss proper inhaler technique and asthma management strategies\n";
    return note;
}

} // namespace fixtures
